#include "permeq/invariant.hpp"

#include "permeq/equivariant.hpp"

namespace permeq {

InvariantSpace invariant_space(const std::vector<Permutation>& gens, int m, int n, int r) {
  if (gens.empty()) throw std::invalid_argument("invariant_space: no generators");
  if (r < 0 || r > std::min(m, n)) throw std::invalid_argument("invariant_space: need 0 <= r <= min(m, n)");
  std::vector<Partition> parts;
  for (const auto& g : gens) {
    if (g.n() != n) throw std::invalid_argument("generator acts on " + std::to_string(g.n()) + " labels, expected " +
                                                std::to_string(n));
    parts.push_back(induced_partition(cycle_decomposition(g)));
  }
  InvariantSpace s;
  s.m = m;
  s.n = n;
  s.r = r;
  s.partition = finest_common_coarsening(parts);
  return s;
}

Matrix psi_compress(const Matrix& m, const Partition& part, double tol) {
  if (m.cols() != part.n) throw std::invalid_argument("psi_compress: column count does not match partition");
  const double thr = tol * (1.0 + m.norm());
  Matrix out(m.rows(), static_cast<Eigen::Index>(part.k()));
  int worst_block = -1;
  double worst = 0;
  for (std::size_t b = 0; b < part.k(); ++b) {
    const auto& blk = part.blocks[b];
    out.col(static_cast<Eigen::Index>(b)) = m.col(blk.front() - 1);
    for (int v : blk) {
      double d = (m.col(v - 1) - m.col(blk.front() - 1)).cwiseAbs().maxCoeff();
      if (m.rows() > 0 && d > worst) {
        worst = d;
        worst_block = static_cast<int>(b);
      }
    }
  }
  if (worst > thr)
    throw InvarianceViolation("columns of block " + std::to_string(worst_block) + " differ by " + std::to_string(worst),
                              worst_block, worst);
  return out;
}

Matrix psi_expand(const Matrix& compact, const Partition& part) {
  if (compact.cols() != static_cast<Eigen::Index>(part.k()))
    throw std::invalid_argument("psi_expand: compact matrix needs " + std::to_string(part.k()) + " columns");
  Matrix out(compact.rows(), part.n);
  for (std::size_t b = 0; b < part.k(); ++b)
    for (int v : part.blocks[b]) out.col(v - 1) = compact.col(static_cast<Eigen::Index>(b));
  return out;
}

Matrix compress_rows(const Matrix& x, const Partition& part) {
  if (x.rows() != part.n) throw std::invalid_argument("compress_rows: row count does not match partition");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(part.k()), x.cols());
  for (std::size_t b = 0; b < part.k(); ++b)
    for (int v : part.blocks[b]) out.row(static_cast<Eigen::Index>(b)) += x.row(v - 1);
  return out;
}

std::int64_t invariant_dimension(const InvariantSpace& s) {
  const std::int64_t rr = s.effective_rank();
  return rr * (s.m + s.k() - rr);
}

BigInt invariant_degree(const InvariantSpace& s) { return determinantal_degree(s.m, s.k(), s.effective_rank()); }

bool is_singular_point(const InvariantSpace& s, const Matrix& m, double tol) {
  Matrix c = psi_compress(m, s.partition, tol);
  if (s.effective_rank() >= std::min(s.m, s.k())) return false;
  return numeric_rank(c) < s.effective_rank();
}

InvariantFactors invariant_autoencoder(const InvariantSpace& s, const Matrix& m, double tol) {
  if (m.rows() != s.m) throw std::invalid_argument("invariant_autoencoder: row count mismatch");
  const Matrix c = psi_compress(m, s.partition, tol);
  const int rr = s.effective_rank();
  const int k = s.k();
  const int rank = numeric_rank(c);
  if (rank > rr) throw std::invalid_argument("invariant_autoencoder: rank " + std::to_string(rank) + " exceeds " +
                                             std::to_string(rr));
  const Matrix e = replication_matrix(s.partition).cast<double>();
  InvariantFactors f;
  if (rr == k) {
    f.decoder = c;
    f.encoder = e;
    return f;
  }
  auto dec = svd(c);
  Matrix b = Matrix::Zero(rr, k);
  f.decoder = Matrix::Zero(s.m, rr);
  for (int i = 0; i < rank; ++i) {
    f.decoder.col(i) = dec.u.col(i) * dec.singular_values[i];
    b.row(i) = dec.vt.row(i);
  }
  // unused bottleneck neurons keep distinct weights per block so the sharing pattern stays visible
  if (rank < rr) b.row(rank) = Eigen::RowVectorXd::LinSpaced(k, 1, k);
  f.encoder = b * e;
  return f;
}

}  // namespace permeq
