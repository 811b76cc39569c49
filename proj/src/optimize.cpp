#include "permeq/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

namespace permeq {

namespace {

// indices of every r-subset of {0..q-1}, in lexicographic order
void for_each_subset(int q, int r, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == q - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool tie_at(const Vector& s, int r, double tol) {
  if (r <= 0 || r >= s.size()) return false;
  return std::abs(s[r - 1] - s[r]) <= tol * std::max(1.0, s[0]);
}

std::vector<double> head(const Vector& s, int r) { return std::vector<double>(s.data(), s.data() + r); }
std::vector<double> tail(const Vector& s, int r) { return std::vector<double>(s.data() + r, s.data() + s.size()); }

void parallel_for(int count, const std::function<void(int)>& f) {
  const int threads = std::min(worker_threads(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::pair<Matrix, Matrix> with_ridge(const Matrix& x, const Matrix& y, double ridge) {
  if (ridge < 0) throw std::invalid_argument("ridge must be non-negative");
  if (ridge == 0) return {x, y};
  const Eigen::Index n = x.rows(), d = x.cols();
  Matrix xa(n, d + n), ya = Matrix::Zero(y.rows(), d + n);
  xa << x, std::sqrt(ridge) * Matrix::Identity(n, n);
  ya.leftCols(d) = y;
  return {xa, ya};
}

void check_data(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.cols()) throw std::invalid_argument("x and y need the same number of columns (samples)");
  if (!x.allFinite() || !y.allFinite()) throw NumericalError("data contains non-finite entries");
}

void require_full_row_rank(const Matrix& x) {
  if (x.cols() < x.rows() || numeric_rank(x) < x.rows())
    throw RankDeficientData("X X^T is rank deficient (rank " + std::to_string(numeric_rank(x)) + " < " +
                            std::to_string(x.rows()) + "); pass a ridge to regularize");
}

Matrix solve_weight(const Matrix& w, const Matrix& rhs_t) {
  Eigen::LDLT<Matrix> ldlt(w);
  if (ldlt.info() != Eigen::Success) throw NumericalError("weight matrix factorization failed");
  return ldlt.solve(rhs_t);
}

// P = direct sum of [[0,1],[-1,0]]
Matrix pair_unit(int d) {
  Matrix p = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    p(2 * i, 2 * i + 1) = 1;
    p(2 * i + 1, 2 * i) = -1;
  }
  return p;
}

struct PairSetup {
  ComplexMatrix z0;
  HermitianFactor h;
  ComplexSvdResult svd;
};

// Odd rows of the pattern carry everything: ||A - U||_W^2 summed over both rows of every pair equals
// ||A_odd - A_odd*||_S^2 + const with S = W + P W P^T, and that form is tr(dZ H dZ^*) for H = unrealize(S).
PairSetup pair_setup(const Matrix& u, const Matrix& w) {
  if (u.rows() % 2 || u.cols() != u.rows() || w.rows() != u.cols())
    throw std::invalid_argument("realization block needs a 2d x 2d target and weight");
  const int d = static_cast<int>(u.rows() / 2);
  const Matrix p = pair_unit(d);
  const Matrix s = w + p * w * p.transpose();
  Matrix u_odd(d, 2 * d), u_even(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    u_odd.row(i) = u.row(2 * i);
    u_even.row(i) = u.row(2 * i + 1);
  }
  const Matrix rhs = u_odd * w + u_even * w * p.transpose();
  const Matrix a_odd = solve_weight(s, rhs.transpose()).transpose();
  PairSetup out;
  out.z0.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.z0(i, j) = cdouble(a_odd(i, 2 * j), -a_odd(i, 2 * j + 1));
  out.h = hermitian_factor(unrealize(s, 1e-8));
  if (!out.h.invertible) throw RankDeficientData("realization block weight is singular");
  out.svd = svd(ComplexMatrix(out.z0 * out.h.sqrt));
  return out;
}

ComplexMatrix complex_truncation(const ComplexSvdResult& f, const std::vector<int>& keep) {
  ComplexMatrix out = ComplexMatrix::Zero(f.u.rows(), f.vh.cols());
  for (int i : keep) out += f.singular_values[i] * f.u.col(i) * f.vh.row(i);
  return out;
}

std::vector<int> first(int r) {
  std::vector<int> v(r);
  for (int i = 0; i < r; ++i) v[i] = i;
  return v;
}

std::string label_of(const RealBlock& b) { return "(" + std::to_string(b.l) + "," + std::to_string(b.m) + ")"; }

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("PERMEQ_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double squared_loss(const Matrix& m, const Matrix& x, const Matrix& y) { return (m * x - y).squaredNorm(); }

EckartYoung eckart_young(const Matrix& u, int r, bool enumerate_critical, double tie_tol) {
  const int q = static_cast<int>(std::min(u.rows(), u.cols()));
  if (r < 0 || r > q) throw std::invalid_argument("eckart_young: need 0 <= r <= min(m, n)");
  const SvdResult f = svd(u);
  EckartYoung out;
  out.singular_values = f.singular_values;
  out.boundary_tie = tie_at(f.singular_values, r, tie_tol);
  auto build = [&](const std::vector<int>& keep) {
    Matrix m = Matrix::Zero(u.rows(), u.cols());
    for (int i : keep) m += f.singular_values[i] * f.u.col(i) * f.vt.row(i);
    return m;
  };
  out.truncated = r == q ? u : build(first(r));
  if (enumerate_critical) {
    if (q > 16) throw std::invalid_argument("eckart_young: critical point enumeration is capped at min(m, n) = 16");
    for_each_subset(q, r, [&](const std::vector<int>& s) { out.critical.push_back(build(s)); });
  }
  return out;
}

SelTarget sel_to_target(const Matrix& x, const Matrix& y, double ridge) {
  check_data(x, y);
  auto [xa, ya] = with_ridge(x, y, ridge);
  require_full_row_rank(xa);
  SelTarget t;
  t.weight = xa * xa.transpose();
  t.u = solve_weight(t.weight, Matrix(xa * ya.transpose())).transpose();
  return t;
}

FitResult fit_rank_bounded(const Matrix& x, const Matrix& y, int r, double ridge) {
  const SelTarget t = sel_to_target(x, y, ridge);
  const int q = static_cast<int>(std::min(t.u.rows(), t.u.cols()));
  if (r < 0) throw std::invalid_argument("rank bound must be non-negative");
  const int rr = std::min(r, q);
  const PsdFactor wf = psd_factor(t.weight);
  if (!wf.invertible) throw RankDeficientData("X X^T is numerically singular");
  const EckartYoung ey = eckart_young(t.u * wf.sqrt, rr);
  FitResult out;
  out.kind = "unconstrained";
  out.rank_bound = r;
  out.minimizer = rr == q ? t.u : Matrix(ey.truncated * wf.inv_sqrt);
  out.loss = squared_loss(out.minimizer, x, y);
  if (ridge > 0) out.ridge = ridge;
  BlockDiagnostics d;
  d.label = "dense";
  d.kind = "dense";
  d.dim = static_cast<int>(t.u.cols());
  d.rank = rr;
  d.kept = head(ey.singular_values, rr);
  d.dropped = tail(ey.singular_values, rr);
  d.boundary_tie = ey.boundary_tie;
  out.non_unique = ey.boundary_tie;
  out.per_block.push_back(d);
  out.search = "given";
  return out;
}

Matrix fit_realization_block(const Matrix& u_block, const Matrix& x_block, int r) {
  const PairSetup ps = pair_setup(u_block, x_block * x_block.transpose());
  const int d = static_cast<int>(ps.z0.rows());
  if (r < 0 || r > d) throw std::invalid_argument("fit_realization_block: need 0 <= r <= d");
  return realize(ComplexMatrix(complex_truncation(ps.svd, first(r)) * ps.h.inv_sqrt));
}

std::vector<Matrix> realization_block_critical(const Matrix& u_block, const Matrix& x_block, int r) {
  const PairSetup ps = pair_setup(u_block, x_block * x_block.transpose());
  const int d = static_cast<int>(ps.z0.rows());
  if (r < 0 || r > d) throw std::invalid_argument("realization_block_critical: need 0 <= r <= d");
  if (d > 16) throw std::invalid_argument("realization_block_critical: capped at d = 16");
  std::vector<Matrix> out;
  for_each_subset(d, r, [&](const std::vector<int>& s) {
    out.push_back(realize(ComplexMatrix(complex_truncation(ps.svd, s) * ps.h.inv_sqrt)));
  });
  return out;
}

std::string to_string(SearchMode m) {
  switch (m) {
    case SearchMode::exhaustive: return "exhaustive";
    case SearchMode::budget_dp: return "budget_dp";
    case SearchMode::energy: return "energy";
  }
  return "?";
}

SearchMode parse_search_mode(const std::string& s) {
  if (s == "exhaustive") return SearchMode::exhaustive;
  if (s == "budget_dp" || s == "dp") return SearchMode::budget_dp;
  if (s == "energy") return SearchMode::energy;
  throw std::invalid_argument("unknown search mode '" + s + "' (exhaustive, budget_dp, energy)");
}

EquivariantProblem prepare_equivariant(const Matrix& x, const Matrix& y, const Permutation& p, double ridge) {
  check_data(x, y);
  if (x.rows() != p.n() || y.rows() != p.n())
    throw std::invalid_argument("x and y need " + std::to_string(p.n()) + " rows");
  auto [xa, ya] = with_ridge(x, y, ridge);
  require_full_row_rank(xa);
  EquivariantProblem prob;
  prob.q = real_base_change(p);
  prob.x = x;
  prob.y = y;
  if (ridge > 0) prob.ridge = ridge;
  const Matrix xt = prob.q.inverse * xa;
  const Matrix yt = prob.q.inverse * ya;
  const auto& blocks = prob.q.layout.real_blocks;
  prob.blocks.resize(blocks.size());
  parallel_for(static_cast<int>(blocks.size()), [&](int i) {
    const RealBlock& b = blocks[i];
    BlockWork& w = prob.blocks[i];
    const Matrix xb = xt.middleRows(b.offset, b.dim());
    const Matrix yb = yt.middleRows(b.offset, b.dim());
    const Matrix wb = xb * xb.transpose();
    const Matrix ub = solve_weight(wb, Matrix(xb * yb.transpose())).transpose();
    Vector sv;
    if (b.kind != RealKind::complex_pair) {
      const PsdFactor f = psd_factor(wb);
      if (!f.invertible) throw RankDeficientData("block " + label_of(b) + " weight is singular");
      w.real_svd = svd(Matrix(ub * f.sqrt));
      w.real_inv_sqrt = f.inv_sqrt;
      w.residual = (ub * xb - yb).squaredNorm();
      sv = w.real_svd.singular_values;
    } else {
      PairSetup ps = pair_setup(ub, wb);
      w.pair = true;
      w.residual = (realize(ps.z0) * xb - yb).squaredNorm();
      w.pair_svd = std::move(ps.svd);
      w.pair_inv_sqrt = std::move(ps.h.inv_sqrt);
      sv = w.pair_svd.singular_values;
    }
    w.loss.assign(b.size + 1, w.residual);
    double acc = 0;
    for (int s = b.size - 1; s >= 0; --s) {
      acc += sv[s] * sv[s];
      w.loss[s] = w.residual + acc;
    }
  });
  return prob;
}

double predicted_loss(const EquivariantProblem& prob, const RankVector& v) {
  double total = 0;
  for (std::size_t i = 0; i < prob.blocks.size(); ++i) total += prob.blocks[i].loss.at(v.entries.at(i).rank);
  return total;
}

Matrix equivariant_minimizer(const EquivariantProblem& prob, const RankVector& v, std::vector<BlockDiagnostics>* diag) {
  const auto& blocks = prob.q.layout.real_blocks;
  if (v.field != Field::real || v.entries.size() != blocks.size())
    throw std::invalid_argument("component must be a real rank vector for this permutation");
  const int n = prob.q.layout.n;
  Matrix mq = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const RealBlock& b = blocks[i];
    const BlockWork& w = prob.blocks[i];
    const int s = v.entries[i].rank;
    Vector sv;
    if (!w.pair) {
      const auto& f = w.real_svd;
      Matrix t = Matrix::Zero(b.size, b.size);
      for (int j = 0; j < s; ++j) t += f.singular_values[j] * f.u.col(j) * f.vt.row(j);
      mq.block(b.offset, b.offset, b.size, b.size) = t * w.real_inv_sqrt;
      sv = f.singular_values;
    } else {
      mq.block(b.offset, b.offset, b.dim(), b.dim()) =
          realize(ComplexMatrix(complex_truncation(w.pair_svd, first(s)) * w.pair_inv_sqrt));
      sv = w.pair_svd.singular_values;
    }
    if (diag) {
      BlockDiagnostics d;
      d.label = label_of(b);
      d.kind = to_string(b.kind);
      d.offset = b.offset;
      d.dim = b.dim();
      d.rank = s;
      d.kept = head(sv, s);
      d.dropped = tail(sv, s);
      d.boundary_tie = tie_at(sv, s, 1e-10);
      diag->push_back(d);
    }
  }
  return prob.q.matrix * mq * prob.q.inverse;
}

namespace {

// Rank vectors with total <= r that cannot be raised anywhere within the budget.
// State of the count: (slot, used budget, smallest weight among unsaturated slots so far; 0 = none).
BigInt count_maximal(const std::vector<Slot>& slots, int r) {
  std::vector<std::vector<BigInt>> cur(r + 1, std::vector<BigInt>(3)), nxt;
  cur[0][0] = 1;
  for (const auto& sl : slots) {
    nxt.assign(r + 1, std::vector<BigInt>(3));
    for (int used = 0; used <= r; ++used)
      for (int f = 0; f < 3; ++f) {
        if (cur[used][f] == 0) continue;
        for (int s = 0; s <= sl.bound && used + s * sl.weight <= r; ++s) {
          int g = f;
          if (s < sl.bound) g = f == 0 ? sl.weight : std::min(f, sl.weight);
          nxt[used + s * sl.weight][g] += cur[used][f];
        }
      }
    cur.swap(nxt);
  }
  BigInt total = 0;
  for (int used = 0; used <= r; ++used)
    for (int f = 0; f < 3; ++f)
      if (f == 0 || r - used < f) total += cur[used][f];
  return total;
}

void for_each_maximal(const std::vector<Slot>& slots, int r, const std::function<void(const std::vector<int>&)>& f) {
  // capacity[i]: most budget slots i.. can still absorb
  std::vector<long> capacity(slots.size() + 1, 0);
  for (std::size_t i = slots.size(); i-- > 0;)
    capacity[i] = capacity[i + 1] + static_cast<long>(slots[i].bound) * slots[i].weight;
  std::vector<int> v(slots.size());
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int used, int minw) {
    // maximal needs a final total above r - minw; give up when the rest cannot get there
    if (minw != 0 && used + capacity[i] <= r - minw) return;
    if (i == slots.size()) {
      f(v);
      return;
    }
    for (int s = 0; s <= slots[i].bound && used + s * slots[i].weight <= r; ++s) {
      v[i] = s;
      int g = minw;
      if (s < slots[i].bound) g = minw == 0 ? slots[i].weight : std::min(minw, slots[i].weight);
      rec(i + 1, used + s * slots[i].weight, g);
    }
  };
  rec(0, 0, 0);
}

std::vector<int> budget_dp(const EquivariantProblem& prob, const std::vector<Slot>& slots, int r) {
  const std::size_t nb = slots.size();
  const double inf = std::numeric_limits<double>::infinity();
  // best[i][c]: smallest loss of slots i.. with budget c
  std::vector<std::vector<double>> best(nb + 1, std::vector<double>(r + 1, 0.0));
  for (std::size_t i = nb; i-- > 0;)
    for (int c = 0; c <= r; ++c) {
      double b = inf;
      for (int s = 0; s <= slots[i].bound && s * slots[i].weight <= c; ++s)
        b = std::min(b, prob.blocks[i].loss[s] + best[i + 1][c - s * slots[i].weight]);
      best[i][c] = b;
    }
  std::vector<int> v(nb);
  int c = r;
  for (std::size_t i = 0; i < nb; ++i) {
    for (int s = 0; s <= slots[i].bound && s * slots[i].weight <= c; ++s)
      if (prob.blocks[i].loss[s] + best[i + 1][c - s * slots[i].weight] == best[i][c]) {
        v[i] = s;
        break;
      }
    c -= v[i] * slots[i].weight;
  }
  return v;
}

// Heuristic: repeatedly give one more rank unit to the block whose next singular value buys the most loss
// per unit of budget.
std::vector<int> energy_allocation(const EquivariantProblem& prob, const std::vector<Slot>& slots, int r) {
  std::vector<int> v(slots.size(), 0);
  int left = r;
  while (true) {
    int pick = -1;
    double gain = -1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (v[i] >= slots[i].bound || slots[i].weight > left) continue;
      const double g = (prob.blocks[i].loss[v[i]] - prob.blocks[i].loss[v[i] + 1]) / slots[i].weight;
      if (g > gain) {
        gain = g;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;
    ++v[pick];
    left -= slots[pick].weight;
  }
  return v;
}

}  // namespace

FitResult fit_equivariant(const Matrix& x, const Matrix& y, const Permutation& p, int r, const FitOptions& opt) {
  if (r < 0 || r > p.n()) throw std::invalid_argument("rank bound must lie in [0, n]");
  const EquivariantProblem prob = prepare_equivariant(x, y, p, opt.ridge);
  const BlockSpectrum& layout = prob.q.layout;
  const auto slots = component_slots(layout, Field::real);
  FitResult out;
  out.kind = "equivariant";
  out.rank_bound = r;
  out.ridge = prob.ridge;
  RankVector chosen;
  if (opt.component) {
    chosen = make_rank_vector(layout, Field::real, opt.component->values());
    if (chosen.total_rank > r)
      throw std::invalid_argument("component " + chosen.to_string() + " has total rank " +
                                  std::to_string(chosen.total_rank) + " > " + std::to_string(r));
    out.search = "given";
    out.candidates.push_back({chosen, predicted_loss(prob, chosen)});
    out.candidates_evaluated = 1;
  } else if (opt.mode == SearchMode::exhaustive) {
    const BigInt count = count_maximal(slots, r);
    if (count > opt.search_limit)
      throw LimitExceeded("component search space has " + count.str() + " candidates, above the search limit " +
                              opt.search_limit.str() + "; name a component or use --mode budget_dp",
                          count);
    out.search = "exhaustive";
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_v;
    const bool keep = count <= 10000;
    for_each_maximal(slots, r, [&](const std::vector<int>& v) {
      double loss = 0;
      for (std::size_t i = 0; i < v.size(); ++i) loss += prob.blocks[i].loss[v[i]];
      ++out.candidates_evaluated;
      if (keep) out.candidates.push_back({make_rank_vector(layout, Field::real, v), loss});
      // enumeration is lexicographic, so strict improvement keeps the smallest vector among ties
      if (loss < best) {
        best = loss;
        best_v = v;
      }
    });
    chosen = make_rank_vector(layout, Field::real, best_v);
  } else if (opt.mode == SearchMode::budget_dp) {
    out.search = "budget_dp";
    chosen = make_rank_vector(layout, Field::real, budget_dp(prob, slots, r));
  } else {
    out.search = "energy";
    out.heuristic = true;
    chosen = make_rank_vector(layout, Field::real, energy_allocation(prob, slots, r));
  }
  out.minimizer = equivariant_minimizer(prob, chosen, &out.per_block);
  out.component = chosen;
  out.loss = squared_loss(out.minimizer, x, y);
  for (const auto& d : out.per_block) out.non_unique = out.non_unique || d.boundary_tie;
  return out;
}

FitResult fit_invariant(const Matrix& x, const Matrix& y, const InvariantSpace& space, double ridge) {
  check_data(x, y);
  if (x.rows() != space.n || y.rows() != space.m)
    throw std::invalid_argument("fit_invariant: x must be n x d and y m x d");
  auto [xa, ya] = with_ridge(x, y, ridge);
  require_full_row_rank(xa);
  // M X = psi(M) Xc exactly, so the invariant problem is a rank-bounded fit on the compressed data
  const Matrix xc = compress_rows(xa, space.partition);
  FitResult inner = fit_rank_bounded(xc, ya, space.effective_rank());
  FitResult out;
  out.kind = "invariant";
  out.rank_bound = space.r;
  out.compact = inner.minimizer;
  out.minimizer = psi_expand(out.compact, space.partition);
  out.loss = squared_loss(out.minimizer, x, y);
  if (ridge > 0) out.ridge = ridge;
  out.per_block = inner.per_block;
  out.per_block.front().label = "compact";
  out.per_block.front().kind = "invariant";
  out.non_unique = inner.non_unique;
  out.search = "given";
  return out;
}

Matrix project_commutant(const Matrix& u, const std::vector<Permutation>& gens, const Matrix& w) {
  int count = 0;
  const IntMatrix lab = orbital_labels(gens, &count);
  const Eigen::Index n = lab.rows();
  if (u.rows() != n || u.cols() != n) throw std::invalid_argument("project_commutant: u must be n x n");
  Vector coef(count);
  if (w.size() == 0) {
    Vector sum = Vector::Zero(count), cnt = Vector::Zero(count);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        sum[lab(i, j)] += u(i, j);
        cnt[lab(i, j)] += 1;
      }
    coef = sum.cwiseQuotient(cnt);
  } else {
    if (w.rows() != n || w.cols() != n) throw std::invalid_argument("project_commutant: w must be n x n");
    if (count > 4096) throw std::invalid_argument("project_commutant: weighted projection capped at dimension 4096");
    // Gram matrix of the orbital indicators under <A,B>_W = tr(A W B^T)
    Matrix g = Matrix::Zero(count, count);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) g(lab(i, j), lab(i, l)) += w(j, l);
    const Matrix uw = u * w;
    Vector rhs = Vector::Zero(count);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) rhs[lab(i, j)] += uw(i, j);
    Eigen::LDLT<Matrix> ldlt(g);
    if (ldlt.info() != Eigen::Success) throw NumericalError("project_commutant: singular weight");
    coef = ldlt.solve(rhs);
  }
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = coef[lab(i, j)];
  return out;
}

Matrix project_invariant(const Matrix& u, const Partition& part, const Matrix& w) {
  if (u.cols() != part.n) throw std::invalid_argument("project_invariant: column count does not match partition");
  const Matrix e = replication_matrix(part).cast<double>();
  if (w.size() == 0) {
    const Vector sizes = e.rowwise().sum();
    return psi_expand(Matrix((u * e.transpose()) * sizes.cwiseInverse().asDiagonal()), part);
  }
  if (w.rows() != part.n || w.cols() != part.n) throw std::invalid_argument("project_invariant: w must be n x n");
  const Matrix g = e * w * e.transpose();
  const Matrix c = solve_weight(g, Matrix(e * w * u.transpose())).transpose();
  return psi_expand(c, part);
}

BigInt ed_degree_determinantal(int m, int n, int r) {
  const int q = std::min(m, n);
  if (r < 0) throw std::invalid_argument("rank must be non-negative");
  return binomial(q, std::min(r, q));
}

BigInt ed_degree_invariant(int m, int k, int r) {
  const int q = std::min(m, k);
  return binomial(q, std::min(std::min(r, k), q));
}

BigInt ed_degree_realization_block(int d, int r) {
  if (r < 0 || r > d) throw std::invalid_argument("need 0 <= r <= d");
  return binomial(d, r);
}

}  // namespace permeq
