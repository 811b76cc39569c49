#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "permeq/bigint.hpp"
#include "permeq/linalg.hpp"
#include "permeq/perm.hpp"
#include "permeq/spectral.hpp"

namespace permeq {

// Raised when a request needs a single cyclic generator.
class CyclicOnlyError : public std::runtime_error {
 public:
  CyclicOnlyError()
      : std::runtime_error("cyclic-only: components are only available for a single generating permutation") {}
};

class LimitExceeded : public std::runtime_error {
 public:
  LimitExceeded(const std::string& what, BigInt count) : std::runtime_error(what), count_(std::move(count)) {}
  const BigInt& count() const { return count_; }

 private:
  BigInt count_;
};

class NotEquivariant : public std::runtime_error {
 public:
  NotEquivariant(const std::string& msg, double deviation) : std::runtime_error(msg), dev_(deviation) {}
  double deviation() const { return dev_; }

 private:
  double dev_;
};

struct RankEntry {
  int l = 1, m = 1;
  int rank = 0;  // complex rank for pair blocks
};

struct RankVector {
  Field field = Field::real;
  std::vector<RankEntry> entries;  // canonical block order of the field
  int total_rank = 0;

  std::vector<int> values() const;
  std::string to_string() const;  // "(1,0,1)"
  bool operator==(const RankVector& o) const { return field == o.field && values() == o.values(); }
};

// One coordinate of a rank vector: rank in [0, bound], costing `weight` units of total rank.
struct Slot {
  int l = 1, m = 1;
  int bound = 0;
  int weight = 1;
  RealKind kind = RealKind::real_plus;  // real field only
};
std::vector<Slot> component_slots(const BlockSpectrum& s, Field f);

RankVector make_rank_vector(const BlockSpectrum& s, Field f, const std::vector<int>& values);
// Comma separated values in canonical order, e.g. "1,0,1".
RankVector parse_rank_vector(const BlockSpectrum& s, Field f, const std::string& text);

struct BlockShape {
  std::string kind;  // "real", "complex" or "realization"
  int l = 1, m = 1;
  int size = 0;
  int rank = 0;
};

struct ComponentDescriptor {
  RankVector rank_vector;
  std::int64_t dimension = 0;
  std::optional<BigInt> degree;  // complex field only
  std::vector<BlockShape> block_shapes;
};

// Orbit label of every pair (i, j) under the group generated by gens; labels are 0..count-1,
// numbered by first appearance in row-major order.
IntMatrix orbital_labels(const std::vector<Permutation>& gens, int* count = nullptr);
// 0/1 indicator basis of {M : M P_g = P_g M for all g}.
std::vector<Matrix> commutant_basis(const std::vector<Permutation>& gens);

double commutator_deviation(const Matrix& m, const Permutation& p);
bool is_equivariant(const Matrix& m, const Permutation& p, double tol = 1e-9);
// Blockwise test after the cycle sort: every l_i x l_j block must be (non-square) circulant.
bool check_circulant_blocks(const Matrix& m, const Permutation& p, double tol = 1e-9);

BigInt count_components(const BlockSpectrum& s, int r, Field f);

// Visits admissible rank vectors with total exactly r, largest first coordinate first.
// Return false from the callback to stop.
void for_each_component(const BlockSpectrum& s, int r, Field f, const std::function<bool(const RankVector&)>& visit);
std::vector<ComponentDescriptor> enumerate_components(const BlockSpectrum& s, int r, Field f,
                                                      const BigInt& limit = BigInt(1000000));

std::int64_t component_dimension(const BlockSpectrum& s, const RankVector& v);
BigInt component_degree_complex(const BlockSpectrum& s, const RankVector& v);
ComponentDescriptor describe_component(const BlockSpectrum& s, const RankVector& v);

// Degree of the variety of m x n matrices of rank <= r.
BigInt determinantal_degree(int m, int n, int r);

// Rank of each block of Q^T M Q (pair ranks halved). Errors on non-equivariant input or odd pair rank.
RankVector classify_component(const Matrix& m, const Permutation& p, double tol = 1e-9, double rank_tol = 1e-10);

struct TiedWeight {
  int row = 0, col = 0;
  int sign = 1;
};
struct WeightSharingReport {
  std::vector<std::vector<TiedWeight>> encoder_groups;
  std::vector<std::vector<TiedWeight>> decoder_groups;
  std::vector<int> inactive_inputs;  // 0-based coordinates of the Q basis with a zero block
  int bottleneck = 0;
  int free_parameters() const {
    return static_cast<int>(encoder_groups.size() + decoder_groups.size());
  }
};

// Per-block factors in the Q basis. Real blocks: a (d x r), b (r x d). Pair blocks: complex a (d x s), b (s x d).
struct BlockFactors {
  std::vector<Matrix> real_a, real_b;
  std::vector<ComplexMatrix> pair_a, pair_b;
};

struct ComponentFactors {
  Matrix decoder;    // n x r, equals Q * decoder_q
  Matrix encoder;    // r x n, equals encoder_q * Q^T
  Matrix decoder_q;  // block sparse
  Matrix encoder_q;
  WeightSharingReport pattern;
};

WeightSharingReport weight_sharing(const BlockSpectrum& s, const RankVector& v);
BlockFactors random_block_factors(const BlockSpectrum& s, const RankVector& v, std::mt19937_64& rng);
ComponentFactors assemble_component(const RealBaseChange& q, const RankVector& v, const BlockFactors& f);
ComponentFactors parameterize_component(const RankVector& v, const Permutation& p, std::mt19937_64& rng);
// Factors of a given equivariant matrix in its own component (balanced square-root split of every block SVD).
ComponentFactors factorize_component(const Matrix& m, const Permutation& p, double tol = 1e-9);

// Real blocks sorted by the phase (l-m)/l of their rotation, low frequencies first.
std::vector<int> frequency_order(const BlockSpectrum& s);

}  // namespace permeq
