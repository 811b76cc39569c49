#pragma once

#include <cstdint>
#include <vector>

#include "permeq/bigint.hpp"
#include "permeq/linalg.hpp"
#include "permeq/perm.hpp"

namespace permeq {

class InvarianceViolation : public std::runtime_error {
 public:
  InvarianceViolation(const std::string& msg, int block, double deviation)
      : std::runtime_error(msg), block_(block), dev_(deviation) {}
  int block() const { return block_; }
  double deviation() const { return dev_; }

 private:
  int block_;
  double dev_;
};

struct InvariantSpace {
  int m = 0, n = 0, r = 0;
  Partition partition;
  int k() const { return static_cast<int>(partition.k()); }
  int effective_rank() const { return std::min(r, k()); }
};

InvariantSpace invariant_space(const std::vector<Permutation>& gens, int m, int n, int r);

// Keeps the first column of every block; block order is canonical.
Matrix psi_compress(const Matrix& m, const Partition& part, double tol = 1e-8);
Matrix psi_expand(const Matrix& compact, const Partition& part);
// Row sums of x over each block: E x.
Matrix compress_rows(const Matrix& x, const Partition& part);

std::int64_t invariant_dimension(const InvariantSpace& s);
BigInt invariant_degree(const InvariantSpace& s);
bool is_singular_point(const InvariantSpace& s, const Matrix& m, double tol = 1e-8);

struct InvariantFactors {
  Matrix decoder;  // m x r'
  Matrix encoder;  // r' x n, columns constant on every block
};
InvariantFactors invariant_autoencoder(const InvariantSpace& s, const Matrix& m, double tol = 1e-8);

}  // namespace permeq
