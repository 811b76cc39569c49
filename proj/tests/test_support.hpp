#pragma once

#include <random>

#include "permeq/equivariant.hpp"
#include "permeq/linalg.hpp"
#include "permeq/perm.hpp"

namespace permeq::testing {

Matrix gaussian(std::mt19937_64& rng, int rows, int cols);
ComplexMatrix complex_gaussian(std::mt19937_64& rng, int rows, int cols);
Permutation random_permutation(std::mt19937_64& rng, int n);
// a few cycles of mixed lengths, randomly relabelled
Permutation random_cycle_type(std::mt19937_64& rng, int max_n);
RankVector random_real_vector(std::mt19937_64& rng, const BlockSpectrum& s);
// pointers to every real parameter of the block factors (complex entries count twice)
std::vector<double*> parameters(BlockFactors& f);
Matrix product(const RealBaseChange& q, const RankVector& v, const BlockFactors& f);

// 3x3 image labelling: corners 1-4, edges 5-8, centre 9.
inline Permutation rotation9() { return parse_permutation("(1 4 3 2)(5 8 7 6)", 9); }
inline Permutation reflection9() { return parse_permutation("(1 2)(3 4)(6 8)", 9); }
inline Permutation row_shift9() { return parse_permutation("(1 5 2)(3 4 7)(6 8 9)", 9); }

}  // namespace permeq::testing
