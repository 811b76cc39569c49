#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace permeq {

using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

}  // namespace permeq
