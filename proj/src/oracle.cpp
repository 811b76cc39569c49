#include "permeq/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

namespace permeq {

std::int64_t nullspace_commutant_dim(const std::vector<Permutation>& gens) {
  if (gens.empty()) throw std::invalid_argument("no generators");
  const int n = gens.front().n();
  if (n > 16) throw OracleCapExceeded("nullspace oracle is capped at n = 16");
  const int nn = n * n;
  Matrix sys = Matrix::Zero(static_cast<Eigen::Index>(gens.size()) * nn, nn);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].n() != n) throw std::invalid_argument("generator size mismatch");
    Matrix p = Matrix::Zero(n, n);
    for (int j = 1; j <= n; ++j) p(j - 1, gens[g](j) - 1) = 1;
    // column-major vec: vec(M P) = (P^T kron I) vec(M), vec(P M) = (I kron P) vec(M)
    Matrix kp = Matrix::Zero(nn, nn), kq = Matrix::Zero(nn, nn);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          kp(a * n + c, b * n + c) = p(b, a);
          kq(a * n + b, a * n + c) = p(b, c);
        }
    sys.block(static_cast<Eigen::Index>(g) * nn, 0, nn, nn) = kp - kq;
  }
  return nn - numeric_rank(sys, 1e-12);
}

namespace {

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

}  // namespace

BigInt recursive_component_count(const BlockSpectrum& s, int r, Field f) {
  // rebuild the blocks from the cycle lengths alone
  int maxlen = 0;
  for (int len : s.cycle_lengths) maxlen = std::max(maxlen, len);
  std::vector<std::pair<int, int>> blocks;  // (bound, weight)
  for (int l = 1; l <= maxlen; ++l) {
    int d = 0;
    for (int len : s.cycle_lengths) d += len % l == 0;
    if (d == 0) continue;
    if (f == Field::complex) {
      for (int m = 1; m <= std::max(1, l - 1); ++m)
        if (l == 1 || gcd_int(m, l) == 1) blocks.push_back({d, 1});
    } else if (l <= 2) {
      blocks.push_back({d, 1});
    } else {
      for (int m = 1; m < l; ++m)
        if (2 * m > l && gcd_int(m, l) == 1) blocks.push_back({d, 2});
    }
  }
  if (blocks.size() > 8) throw OracleCapExceeded("recursive count is capped at 8 blocks");
  for (auto [d, w] : blocks)
    if (d > 30) throw OracleCapExceeded("recursive count is capped at bound 30");
  std::function<BigInt(std::size_t, int)> rec = [&](std::size_t i, int left) -> BigInt {
    if (i == blocks.size()) return left == 0 ? 1 : 0;
    BigInt total = 0;
    for (int x = 0; x <= blocks[i].first && x * blocks[i].second <= left; ++x)
      total += rec(i + 1, left - x * blocks[i].second);
    return total;
  };
  return r < 0 ? BigInt(0) : rec(0, r);
}

BilinearModel dense_model(int m, int n, int r) {
  BilinearModel model;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j) {
      Matrix e = Matrix::Zero(m, r);
      e(i, j) = 1;
      model.decoder_basis.push_back(e);
    }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(r, n);
      e(i, j) = 1;
      model.encoder_basis.push_back(e);
    }
  return model;
}

BilinearModel invariant_model(const Partition& part, int m, int r) {
  const int k = static_cast<int>(part.k());
  const int rr = std::min(r, k);
  BilinearModel model;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < rr; ++j) {
      Matrix e = Matrix::Zero(m, rr);
      e(i, j) = 1;
      model.decoder_basis.push_back(e);
    }
  for (int i = 0; i < rr; ++i)
    for (int b = 0; b < k; ++b) {
      Matrix e = Matrix::Zero(rr, part.n);
      for (int v : part.blocks[b]) e(i, v - 1) = 1;
      model.encoder_basis.push_back(e);
    }
  return model;
}

BilinearModel equivariant_component_model(const Permutation& p, const std::vector<int>& real_ranks) {
  const RealBaseChange q = real_base_change(p);
  const auto& blocks = q.layout.real_blocks;
  if (real_ranks.size() != blocks.size()) throw std::invalid_argument("rank vector length mismatch");
  const int n = p.n();
  int width = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    width += blocks[i].kind == RealKind::complex_pair ? 2 * real_ranks[i] : real_ranks[i];
  BilinearModel model;
  int bo = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    const int rk = real_ranks[i];
    if (b.kind != RealKind::complex_pair) {
      for (int a = 0; a < b.size; ++a)
        for (int c = 0; c < rk; ++c) {
          Matrix dq = Matrix::Zero(n, width), eq = Matrix::Zero(width, n);
          dq(b.offset + a, bo + c) = 1;
          eq(bo + c, b.offset + a) = 1;
          model.decoder_basis.push_back(q.matrix * dq);
          model.encoder_basis.push_back(eq * q.matrix.transpose());
        }
      bo += rk;
      continue;
    }
    // a complex entry x + iy sits in a 2x2 block [[x, -y], [y, x]]
    for (int a = 0; a < b.size; ++a)
      for (int c = 0; c < rk; ++c)
        for (int part = 0; part < 2; ++part) {
          Matrix dq = Matrix::Zero(n, width), eq = Matrix::Zero(width, n);
          const int r0 = b.offset + 2 * a, c0 = bo + 2 * c;
          const int er0 = bo + 2 * c, ec0 = b.offset + 2 * a;
          if (part == 0) {
            dq(r0, c0) = dq(r0 + 1, c0 + 1) = 1;
            eq(er0, ec0) = eq(er0 + 1, ec0 + 1) = 1;
          } else {
            dq(r0 + 1, c0) = 1;
            dq(r0, c0 + 1) = -1;
            eq(er0 + 1, ec0) = 1;
            eq(er0, ec0 + 1) = -1;
          }
          model.decoder_basis.push_back(q.matrix * dq);
          model.encoder_basis.push_back(eq * q.matrix.transpose());
        }
    bo += 2 * rk;
  }
  return model;
}

namespace {

Matrix combine(const std::vector<Matrix>& basis, const Vector& coef, Eigen::Index rows, Eigen::Index cols) {
  Matrix out = Matrix::Zero(rows, cols);
  for (std::size_t i = 0; i < basis.size(); ++i) out += coef[static_cast<Eigen::Index>(i)] * basis[i];
  return out;
}

Vector solve_ls(const Matrix& phi, const Vector& target) {
  return Eigen::CompleteOrthogonalDecomposition<Matrix>(phi).solve(target);
}

struct AlsRun {
  const BilinearModel& model;
  const Matrix& x;
  const Matrix& y;
  Eigen::Index m, r, n;
  std::vector<Matrix> enc_x;  // E_j X

  AlsRun(const BilinearModel& mod, const Matrix& xx, const Matrix& yy) : model(mod), x(xx), y(yy) {
    m = y.rows();
    n = x.rows();
    r = mod.decoder_basis.empty() ? (mod.encoder_basis.empty() ? 0 : mod.encoder_basis.front().rows())
                                  : mod.decoder_basis.front().cols();
    for (const auto& e : mod.encoder_basis) enc_x.push_back(e * x);
  }

  double loss(const Vector& a, const Vector& b) const {
    if (r == 0) return y.squaredNorm();
    Matrix dec = combine(model.decoder_basis, a, m, r);
    Matrix z = Matrix::Zero(r, x.cols());
    for (std::size_t j = 0; j < enc_x.size(); ++j) z += b[static_cast<Eigen::Index>(j)] * enc_x[j];
    return (dec * z - y).squaredNorm();
  }

  Matrix minimizer(const Vector& a, const Vector& b) const {
    if (r == 0) return Matrix::Zero(m, n);
    return combine(model.decoder_basis, a, m, r) * combine(model.encoder_basis, b, r, n);
  }

  // returns the final loss; a and b are updated in place
  double polish(Vector& a, Vector& b, const AlsOptions& opt) const {
    if (r == 0) return y.squaredNorm();
    const Eigen::Index md = m * x.cols();
    Eigen::Map<const Vector> vy(y.data(), md);
    double prev = loss(a, b);
    for (int it = 0; it < opt.max_iters; ++it) {
      Matrix z = Matrix::Zero(r, x.cols());
      for (std::size_t j = 0; j < enc_x.size(); ++j) z += b[static_cast<Eigen::Index>(j)] * enc_x[j];
      Matrix phi(md, static_cast<Eigen::Index>(model.decoder_basis.size()));
      for (std::size_t i = 0; i < model.decoder_basis.size(); ++i) {
        Matrix f = model.decoder_basis[i] * z;
        phi.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(f.data(), md);
      }
      a = solve_ls(phi, vy);
      Matrix dec = combine(model.decoder_basis, a, m, r);
      Matrix psi(md, static_cast<Eigen::Index>(enc_x.size()));
      for (std::size_t j = 0; j < enc_x.size(); ++j) {
        Matrix f = dec * enc_x[j];
        psi.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(f.data(), md);
      }
      b = solve_ls(psi, vy);
      const double cur = loss(a, b);
      if (prev - cur <= opt.rel_tol * std::max(prev, 1e-300)) {
        prev = std::min(prev, cur);
        break;
      }
      prev = cur;
    }
    return prev;
  }
};

Vector random_vector(std::mt19937_64& rng, std::size_t size) {
  std::normal_distribution<double> nd;
  Vector v(static_cast<Eigen::Index>(size));
  for (auto& c : v) c = nd(rng);
  return v;
}

void check_caps(const Matrix& x, const Matrix& y, int cap) {
  if (x.rows() > cap || y.rows() > cap) throw OracleCapExceeded("ALS oracle is capped at dimension " + std::to_string(cap));
}

}  // namespace

OracleFit als_bilinear(const BilinearModel& model, const Matrix& x, const Matrix& y, const AlsOptions& opt) {
  AlsRun run(model, x, y);
  std::mt19937_64 rng(opt.seed);
  OracleFit best{std::numeric_limits<double>::infinity(), Matrix()};
  for (int s = 0; s < std::max(1, opt.restarts); ++s) {
    Vector a = random_vector(rng, model.decoder_basis.size());
    Vector b = random_vector(rng, model.encoder_basis.size());
    double l = run.polish(a, b, opt);
    if (l < best.loss) best = {l, run.minimizer(a, b)};
  }
  return best;
}

OracleFit sample_then_polish(const BilinearModel& model, const Matrix& x, const Matrix& y, int samples,
                             const AlsOptions& opt) {
  AlsRun run(model, x, y);
  std::mt19937_64 rng(opt.seed + 1);
  Vector best_a, best_b;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::max(1, samples); ++s) {
    Vector a = random_vector(rng, model.decoder_basis.size());
    Vector b = random_vector(rng, model.encoder_basis.size());
    // random scale so that small-norm points are sampled too
    const double scale = std::exp(std::uniform_real_distribution<double>(-3, 1)(rng));
    a *= scale;
    double l = run.loss(a, b);
    if (l < best) {
      best = l;
      best_a = a;
      best_b = b;
    }
  }
  double polished = run.polish(best_a, best_b, opt);
  return {polished, run.minimizer(best_a, best_b)};
}

double als_low_rank(const Matrix& u, int r, const AlsOptions& opt) {
  check_caps(u, u, 12);
  if (u.cols() > 12) throw OracleCapExceeded("ALS oracle is capped at dimension 12");
  Matrix id = Matrix::Identity(u.cols(), u.cols());
  return als_bilinear(dense_model(static_cast<int>(u.rows()), static_cast<int>(u.cols()), r), id, u, opt).loss;
}

double als_fit(const Matrix& x, const Matrix& y, int r, const AlsOptions& opt) {
  check_caps(x, y, 12);
  return als_bilinear(dense_model(static_cast<int>(y.rows()), static_cast<int>(x.rows()), r), x, y, opt).loss;
}

double als_equivariant_global(const Matrix& x, const Matrix& y, const Permutation& p, int r, const AlsOptions& opt,
                              bool sample_first) {
  if (p.n() > 10) throw OracleCapExceeded("equivariant oracle is capped at n = 10");
  const RealBaseChange q = real_base_change(p);
  const auto& blocks = q.layout.real_blocks;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> cur(blocks.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == blocks.size()) {
      // only vectors where no coordinate can grow; smaller ones are contained in these
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        const int w = blocks[j].kind == RealKind::complex_pair ? 2 : 1;
        if (cur[j] < blocks[j].size && w <= left) return;
      }
      auto model = equivariant_component_model(p, cur);
      double l = sample_first ? sample_then_polish(model, x, y, 10000, opt).loss : als_bilinear(model, x, y, opt).loss;
      best = std::min(best, l);
      return;
    }
    const int w = blocks[i].kind == RealKind::complex_pair ? 2 : 1;
    for (int v = 0; v <= blocks[i].size && v * w <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v * w);
    }
    cur[i] = 0;
  };
  rec(0, r);
  return best;
}

}  // namespace permeq
