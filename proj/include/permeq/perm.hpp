#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace permeq {

using IntMatrix = Eigen::MatrixXi;

// Raised by parse_permutation; token() is the offending piece of input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::string token)
      : std::runtime_error(msg), token_(std::move(token)) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// A bijection of {1,...,n}. image()[j-1] = sigma(j).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int n);

  int n() const { return static_cast<int>(image_.size()); }
  const std::vector<int>& image() const { return image_; }
  int operator()(int j) const { return image_[j - 1]; }

  Permutation inverse() const;
  // (a.compose(b))(j) = a(b(j))
  Permutation compose(const Permutation& b) const;
  Permutation power(long long t) const;
  bool is_identity() const;
  // lcm of cycle lengths, saturating at UINT64_MAX
  std::uint64_t order() const;
  std::string to_string() const;

  bool operator==(const Permutation& o) const { return image_ == o.image_; }

 private:
  std::vector<int> image_;
};

struct CycleDecomposition {
  int n = 0;
  std::vector<std::vector<int>> cycles;

  std::size_t k() const { return cycles.size(); }
  std::vector<int> lengths() const;
};

struct Partition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  // Validates and puts blocks into canonical order.
  static Partition from_blocks(int n, std::vector<std::vector<int>> blocks);
  static Partition singletons(int n);

  std::size_t k() const { return blocks.size(); }
  // block index (0-based) for each label 1..n, stored at [label-1]
  std::vector<int> block_of() const;
  std::string to_string() const;
  bool operator==(const Partition& o) const { return n == o.n && blocks == o.blocks; }
};

// Cycle notation "(1 4 3 2)(5 8 7 6)" or a one-line image "3,5,4,1,2".
Permutation parse_permutation(std::string_view text, int n);

CycleDecomposition cycle_decomposition(const Permutation& p);
Partition induced_partition(const CycleDecomposition& c);

// Row j of the result is e_{sigma(j)}^T.
IntMatrix permutation_matrix(const Permutation& p);

// Index-based application of P_sigma: (P x)_j = x_{sigma(j)}. Works column-wise on matrices.
Eigen::MatrixXd apply_permutation(const Permutation& p, const Eigen::MatrixXd& x);

Partition finest_common_coarsening(const std::vector<Partition>& parts);
bool refines(const Partition& finer, const Partition& coarser);

// k x n 0/1 matrix with column j equal to e_i for j in block i.
IntMatrix replication_matrix(const Partition& part);

// count cycles of the given length on consecutive labels
Permutation cycle_type_permutation(int count, int length);

// Pixel permutations on an h x w image stored row-major (label = row*w + col + 1).
Permutation grid_rotation(int p);           // clockwise quarter turn of a p x p image
Permutation grid_horizontal_shift(int h, int w);  // each row shifted one pixel to the right, cyclically

}  // namespace permeq
