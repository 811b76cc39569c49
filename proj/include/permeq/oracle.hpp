#pragma once

// Slow, independent reference computations for cross-checking the closed forms.
// Nothing here calls the counting DP or the closed-form fits.

#include <cstdint>
#include <vector>

#include "permeq/bigint.hpp"
#include "permeq/linalg.hpp"
#include "permeq/perm.hpp"
#include "permeq/spectral.hpp"

namespace permeq {

class OracleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nullity of M -> (M P_g - P_g M)_g as a dense n^2-column system. n <= 16.
std::int64_t nullspace_commutant_dim(const std::vector<Permutation>& gens);

// Plain recursion over rank vectors. At most 8 blocks with bounds <= 30.
BigInt recursive_component_count(const BlockSpectrum& s, int r, Field f);

struct AlsOptions {
  int restarts = 100;
  int max_iters = 4000;
  double rel_tol = 1e-14;
  std::uint64_t seed = 7;
};

// M = A * B with A in span(decoder_basis), B in span(encoder_basis); loss ||M X - Y||_F^2.
struct BilinearModel {
  std::vector<Matrix> decoder_basis;
  std::vector<Matrix> encoder_basis;
};

BilinearModel dense_model(int m, int n, int r);
// decoder free m x r', encoder B * E with B free r' x k
BilinearModel invariant_model(const Partition& part, int m, int r);
// Block factors of one real component in the Q basis, mapped back by Q.
BilinearModel equivariant_component_model(const Permutation& p, const std::vector<int>& real_ranks);

struct OracleFit {
  double loss = 0;
  Matrix minimizer;
};

OracleFit als_bilinear(const BilinearModel& model, const Matrix& x, const Matrix& y, const AlsOptions& opt = {});
// Best of `samples` random coefficient draws, then polished by ALS.
OracleFit sample_then_polish(const BilinearModel& model, const Matrix& x, const Matrix& y, int samples,
                             const AlsOptions& opt = {});

// min ||A B - U||_F^2 over A (m x r), B (r x n). dims <= 12.
double als_low_rank(const Matrix& u, int r, const AlsOptions& opt = {});
// min ||A B X - Y||_F^2. dims <= 12.
double als_fit(const Matrix& x, const Matrix& y, int r, const AlsOptions& opt = {});
// Best over every real rank vector of total <= r (enumerated here by brute force). n <= 10.
double als_equivariant_global(const Matrix& x, const Matrix& y, const Permutation& p, int r, const AlsOptions& opt = {},
                              bool sample_first = false);

}  // namespace permeq
