#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "permeq/bigint.hpp"
#include "permeq/equivariant.hpp"
#include "permeq/invariant.hpp"
#include "permeq/linalg.hpp"
#include "permeq/perm.hpp"

namespace permeq {

// X X^T is singular at tolerance and no ridge was requested.
class RankDeficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

double squared_loss(const Matrix& m, const Matrix& x, const Matrix& y);

struct EckartYoung {
  Matrix truncated;
  Vector singular_values;
  bool boundary_tie = false;       // sigma_r == sigma_{r+1} within tol
  std::vector<Matrix> critical;    // every r-subset truncation, when requested
};
// enumerate_critical is refused above min(m, n) = 16.
EckartYoung eckart_young(const Matrix& u, int r, bool enumerate_critical = false, double tie_tol = 1e-10);

struct SelTarget {
  Matrix u;       // Y X^T (X X^T)^{-1}
  Matrix weight;  // X X^T (+ ridge * Id)
};
// ||M X - Y||^2 = ||M - U||_W^2 + const for every M.
SelTarget sel_to_target(const Matrix& x, const Matrix& y, double ridge = 0);

struct BlockDiagnostics {
  std::string label;  // "(1,1)", "(4,3)", "dense", "compact"
  std::string kind;   // "real_plus", "real_minus", "complex_pair", "dense", "invariant"
  int offset = 0, dim = 0;
  int rank = 0;       // complex rank on pair blocks
  std::vector<double> kept, dropped;
  bool boundary_tie = false;
};

struct CandidateLoss {
  RankVector component;
  double loss = 0;  // predicted from the per-block tables
};

struct FitResult {
  Matrix minimizer;
  double loss = 0;         // ||M X - Y||_F^2 recomputed from the minimizer, without ridge
  std::string kind;        // "unconstrained", "invariant" or "equivariant"
  int rank_bound = 0;
  std::optional<RankVector> component;
  std::vector<BlockDiagnostics> per_block;
  std::optional<double> ridge;
  bool non_unique = false;  // some block had a boundary tie
  Matrix compact;           // invariant fits: the m x k factor
  std::vector<CandidateLoss> candidates;  // kept only when at most 10000 were evaluated
  std::size_t candidates_evaluated = 0;
  std::string search;       // "given", "exhaustive", "budget_dp" or "energy"
  bool heuristic = false;
};

FitResult fit_rank_bounded(const Matrix& x, const Matrix& y, int r, double ridge = 0);

// Minimizes over the realization pattern of complex rank <= r on one 2d x 2d block; x_block holds
// the matching rows of the transformed data.
Matrix fit_realization_block(const Matrix& u_block, const Matrix& x_block, int r);
// All subset truncations of the same problem (critical points).
std::vector<Matrix> realization_block_critical(const Matrix& u_block, const Matrix& x_block, int r);

enum class SearchMode { exhaustive, budget_dp, energy };
std::string to_string(SearchMode m);
SearchMode parse_search_mode(const std::string& s);

struct FitOptions {
  std::optional<RankVector> component;
  BigInt search_limit = 1000000;
  SearchMode mode = SearchMode::exhaustive;
  double ridge = 0;
};

// One diagonal block of the Q basis after the least-squares step. Real blocks keep the SVD of U W^{1/2};
// pair blocks keep the complex SVD of Z0 H^{1/2}.
struct BlockWork {
  bool pair = false;
  SvdResult real_svd;
  Matrix real_inv_sqrt;
  ComplexSvdResult pair_svd;
  ComplexMatrix pair_inv_sqrt;
  double residual = 0;       // loss of the block at full rank
  std::vector<double> loss;  // loss at rank s = 0..bound
};

struct EquivariantProblem {
  RealBaseChange q;
  Matrix x, y;  // original data (no ridge columns)
  std::optional<double> ridge;
  std::vector<BlockWork> blocks;  // canonical real block order
};
EquivariantProblem prepare_equivariant(const Matrix& x, const Matrix& y, const Permutation& p, double ridge = 0);
double predicted_loss(const EquivariantProblem& prob, const RankVector& v);
Matrix equivariant_minimizer(const EquivariantProblem& prob, const RankVector& v,
                             std::vector<BlockDiagnostics>* diag = nullptr);

FitResult fit_equivariant(const Matrix& x, const Matrix& y, const Permutation& p, int r, const FitOptions& opt = {});
FitResult fit_invariant(const Matrix& x, const Matrix& y, const InvariantSpace& space, double ridge = 0);

// Nearest point of the linear space under ||.||_W (W empty means Frobenius).
Matrix project_commutant(const Matrix& u, const std::vector<Permutation>& gens, const Matrix& w = Matrix());
Matrix project_invariant(const Matrix& u, const Partition& part, const Matrix& w = Matrix());

BigInt ed_degree_determinantal(int m, int n, int r);
BigInt ed_degree_invariant(int m, int k, int r);
BigInt ed_degree_realization_block(int d, int r);

// PERMEQ_THREADS, else the hardware concurrency.
int worker_threads();

}  // namespace permeq
