#include "permeq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <lapacke.h>

namespace permeq {

namespace {

template <class M>
void require_finite(const M& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entry");
}

}  // namespace

namespace {

// LAPACK divide and conquer, falling back to the QR iteration driver when it does not converge.
template <class M, class Res>
void lapack_svd(const M& m, bool vectors, Res& out);

template <>
void lapack_svd(const Matrix& m, bool vectors, SvdResult& out) {
  const lapack_int rows = static_cast<lapack_int>(m.rows()), cols = static_cast<lapack_int>(m.cols());
  const lapack_int p = std::min(rows, cols);
  Matrix a = m;
  out.singular_values.resize(p);
  Matrix u = vectors ? Matrix(rows, rows) : Matrix(1, 1);
  Matrix vt = vectors ? Matrix(cols, cols) : Matrix(1, 1);
  const char job = vectors ? 'A' : 'N';
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, job, rows, cols, a.data(), rows, out.singular_values.data(),
                                   u.data(), vectors ? rows : 1, vt.data(), vectors ? cols : 1);
  if (info != 0) {
    a = m;
    std::vector<double> superb(std::max<lapack_int>(1, p));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, job, job, rows, cols, a.data(), rows, out.singular_values.data(), u.data(),
                          vectors ? rows : 1, vt.data(), vectors ? cols : 1, superb.data());
  }
  if (info != 0) throw NumericalError("svd did not converge (LAPACK info " + std::to_string(info) + ")");
  if (vectors) {
    out.u = std::move(u);
    out.vt = std::move(vt);
  }
}

template <>
void lapack_svd(const ComplexMatrix& m, bool vectors, ComplexSvdResult& out) {
  const lapack_int rows = static_cast<lapack_int>(m.rows()), cols = static_cast<lapack_int>(m.cols());
  const lapack_int p = std::min(rows, cols);
  ComplexMatrix a = m;
  out.singular_values.resize(p);
  ComplexMatrix u = vectors ? ComplexMatrix(rows, rows) : ComplexMatrix(1, 1);
  ComplexMatrix vh = vectors ? ComplexMatrix(cols, cols) : ComplexMatrix(1, 1);
  const char job = vectors ? 'A' : 'N';
  auto* ap = reinterpret_cast<lapack_complex_double*>(a.data());
  auto* up = reinterpret_cast<lapack_complex_double*>(u.data());
  auto* vp = reinterpret_cast<lapack_complex_double*>(vh.data());
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, job, rows, cols, ap, rows, out.singular_values.data(), up,
                                   vectors ? rows : 1, vp, vectors ? cols : 1);
  if (info != 0) {
    a = m;
    std::vector<double> superb(std::max<lapack_int>(1, p));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, rows, cols, ap, rows, out.singular_values.data(), up,
                          vectors ? rows : 1, vp, vectors ? cols : 1, superb.data());
  }
  if (info != 0) throw NumericalError("complex svd did not converge (LAPACK info " + std::to_string(info) + ")");
  if (vectors) {
    out.u = std::move(u);
    out.vh = std::move(vh);
  }
}

}  // namespace

SvdResult svd(const Matrix& m) {
  require_finite(m, "svd");
  SvdResult out;
  if (m.size() == 0) {
    out.u = Matrix::Identity(m.rows(), m.rows());
    out.vt = Matrix::Identity(m.cols(), m.cols());
    out.singular_values = Vector::Zero(std::min(m.rows(), m.cols()));
    return out;
  }
  lapack_svd(m, true, out);
  return out;
}

ComplexSvdResult svd(const ComplexMatrix& m) {
  require_finite(m, "svd");
  ComplexSvdResult out;
  if (m.size() == 0) {
    out.u = ComplexMatrix::Identity(m.rows(), m.rows());
    out.vh = ComplexMatrix::Identity(m.cols(), m.cols());
    out.singular_values = Vector::Zero(std::min(m.rows(), m.cols()));
    return out;
  }
  lapack_svd(m, true, out);
  return out;
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return Vector::Zero(std::min(m.rows(), m.cols()));
  SvdResult out;
  lapack_svd(m, false, out);
  return out.singular_values;
}

Vector singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return Vector::Zero(std::min(m.rows(), m.cols()));
  ComplexSvdResult out;
  lapack_svd(m, false, out);
  return out.singular_values;
}

int numeric_rank_from_values(const Vector& s, Eigen::Index rows, Eigen::Index cols, double rel_tol) {
  if (s.size() == 0) return 0;
  const double smax = s.maxCoeff();
  if (smax <= 0) return 0;
  const double thr = rel_tol * smax * static_cast<double>(std::max(rows, cols));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > thr) ++r;
  return r;
}

int numeric_rank(const Matrix& m, double rel_tol) {
  return numeric_rank_from_values(singular_values(m), m.rows(), m.cols(), rel_tol);
}

int numeric_rank(const ComplexMatrix& m, double rel_tol) {
  return numeric_rank_from_values(singular_values(m), m.rows(), m.cols(), rel_tol);
}

Matrix circulant(const Vector& v) {
  const Eigen::Index n = v.size();
  if (n < 1) throw std::invalid_argument("circulant: empty vector");
  Matrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = v[((j - i) % n + n) % n];
  return c;
}

Matrix realize(const ComplexMatrix& z) {
  Matrix m(2 * z.rows(), 2 * z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      const double a = z(i, j).real(), b = z(i, j).imag();
      m(2 * i, 2 * j) = a;
      m(2 * i, 2 * j + 1) = -b;
      m(2 * i + 1, 2 * j) = b;
      m(2 * i + 1, 2 * j + 1) = a;
    }
  return m;
}

double realization_deviation(const Matrix& m, int* worst_row, int* worst_col) {
  double worst = 0;
  int wr = -1, wc = -1;
  for (Eigen::Index i = 0; i < m.rows() / 2; ++i)
    for (Eigen::Index j = 0; j < m.cols() / 2; ++j) {
      double d = std::max(std::abs(m(2 * i, 2 * j) - m(2 * i + 1, 2 * j + 1)),
                          std::abs(m(2 * i, 2 * j + 1) + m(2 * i + 1, 2 * j)));
      if (wr < 0 || d > worst) {
        worst = d;
        wr = static_cast<int>(i);
        wc = static_cast<int>(j);
      }
    }
  if (worst_row) *worst_row = wr;
  if (worst_col) *worst_col = wc;
  return worst;
}

ComplexMatrix unrealize(const Matrix& m, double tol) {
  if (m.rows() % 2 || m.cols() % 2) throw StructuralError("unrealize: odd dimensions", -1, -1, 0);
  int wr = -1, wc = -1;
  const double dev = realization_deviation(m, &wr, &wc);
  const double scale = 1.0 + (m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (dev > tol * scale)
    throw StructuralError("unrealize: block (" + std::to_string(wr) + "," + std::to_string(wc) +
                              ") violates the realization pattern by " + std::to_string(dev),
                          wr, wc, dev);
  ComplexMatrix z(m.rows() / 2, m.cols() / 2);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = cdouble(m(2 * i, 2 * j), -m(2 * i, 2 * j + 1));
  return z;
}

double weighted_inner(const Matrix& a, const Matrix& b, const Matrix& w, double tol) {
  if (a.cols() != w.rows() || b.cols() != w.cols() || a.rows() != b.rows() || w.rows() != w.cols())
    throw std::invalid_argument("weighted_inner: shape mismatch");
  const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * (1.0 + w.cwiseAbs().maxCoeff())) throw std::invalid_argument("weighted_inner: w not symmetric");
  return (a * w).cwiseProduct(b).sum();
}

PsdFactor psd_factor(const Matrix& w, double tol) {
  if (w.rows() != w.cols()) throw std::invalid_argument("psd_factor: not square");
  require_finite(w, "psd_factor");
  PsdFactor f;
  if (w.size() == 0) {
    f.sqrt = f.inv_sqrt = w;
    f.invertible = true;
    return f;
  }
  const double norm = w.norm();
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + norm))
    throw std::invalid_argument("psd_factor: not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("psd_factor: eigensolver failed");
  Vector ev = es.eigenvalues();
  if (ev.minCoeff() < -tol * std::max(norm, 1e-300)) throw std::invalid_argument("psd_factor: indefinite input");
  const double cut = tol * std::max(norm, 1e-300);
  f.eigenvalues = ev.cwiseMax(0.0);
  const Matrix& q = es.eigenvectors();
  f.sqrt = q * f.eigenvalues.cwiseSqrt().asDiagonal() * q.transpose();
  f.invertible = ev.minCoeff() > cut;
  if (f.invertible) f.inv_sqrt = q * f.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  return f;
}

Matrix psd_sqrt(const Matrix& w, double tol) { return psd_factor(w, tol).sqrt; }

HermitianFactor hermitian_factor(const ComplexMatrix& h, double tol) {
  require_finite(h, "hermitian_factor");
  HermitianFactor f;
  if (h.size() == 0) {
    f.sqrt = f.inv_sqrt = h;
    f.invertible = true;
    return f;
  }
  const double norm = h.norm();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_factor: eigensolver failed");
  Vector ev = es.eigenvalues();
  if (ev.minCoeff() < -tol * norm) throw std::invalid_argument("hermitian_factor: indefinite input");
  Vector pos = ev.cwiseMax(0.0);
  const ComplexMatrix& q = es.eigenvectors();
  f.sqrt = q * pos.cwiseSqrt().cast<cdouble>().asDiagonal() * q.adjoint();
  f.invertible = ev.minCoeff() > tol * norm;
  if (f.invertible) f.inv_sqrt = q * pos.cwiseSqrt().cwiseInverse().cast<cdouble>().asDiagonal() * q.adjoint();
  return f;
}

double frobenius_sq(const Matrix& m) { return m.squaredNorm(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix orthogonal_from_gaussian(const Matrix& g) {
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols() && i < r.rows(); ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace permeq
