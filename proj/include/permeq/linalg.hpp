#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace permeq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using cdouble = std::complex<double>;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a required matrix pattern. block() is the worst offending (row, col) block.
class StructuralError : public std::runtime_error {
 public:
  StructuralError(const std::string& msg, int block_row, int block_col, double deviation)
      : std::runtime_error(msg), row_(block_row), col_(block_col), dev_(deviation) {}
  int block_row() const { return row_; }
  int block_col() const { return col_; }
  double deviation() const { return dev_; }

 private:
  int row_, col_;
  double dev_;
};

struct SvdResult {
  Matrix u;                 // m x m
  Vector singular_values;   // descending, length min(m, n)
  Matrix vt;                // n x n
};

struct ComplexSvdResult {
  ComplexMatrix u;
  Vector singular_values;
  ComplexMatrix vh;  // conjugate transpose of V
};

// Backed by LAPACK gesdd (gesvd fallback); singular values descending.
SvdResult svd(const Matrix& m);
ComplexSvdResult svd(const ComplexMatrix& m);
Vector singular_values(const Matrix& m);
Vector singular_values(const ComplexMatrix& m);

int numeric_rank(const Matrix& m, double rel_tol = 1e-10);
int numeric_rank(const ComplexMatrix& m, double rel_tol = 1e-10);
int numeric_rank_from_values(const Vector& singular_values, Eigen::Index rows, Eigen::Index cols,
                             double rel_tol = 1e-10);

// First row is v; each following row is the previous one shifted one step to the right.
Matrix circulant(const Vector& v);

// 2m x 2n real matrix with blocks [[Re, -Im], [Im, Re]].
Matrix realize(const ComplexMatrix& z);
ComplexMatrix unrealize(const Matrix& m, double tol = 1e-10);
// Largest |a-d|, |b+c| over all 2x2 blocks; the block index is written to the out-params.
double realization_deviation(const Matrix& m, int* worst_row = nullptr, int* worst_col = nullptr);

double weighted_inner(const Matrix& a, const Matrix& b, const Matrix& w, double tol = 1e-10);

// Symmetric square root and (when positive definite) inverse square root from one eigendecomposition.
struct PsdFactor {
  Matrix sqrt;
  Matrix inv_sqrt;  // empty when the input is singular
  Vector eigenvalues;
  bool invertible = false;
};
PsdFactor psd_factor(const Matrix& w, double tol = 1e-10);
Matrix psd_sqrt(const Matrix& w, double tol = 1e-10);

struct HermitianFactor {
  ComplexMatrix sqrt;
  ComplexMatrix inv_sqrt;
  bool invertible = false;
};
HermitianFactor hermitian_factor(const ComplexMatrix& h, double tol = 1e-10);

double frobenius_sq(const Matrix& m);
bool all_finite(const Matrix& m);

// Haar-ish random orthogonal matrix from the QR of a Gaussian matrix; the caller supplies the Gaussian draw.
Matrix orthogonal_from_gaussian(const Matrix& g);

}  // namespace permeq
