#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "permeq/linalg.hpp"
#include "permeq/matrix_io.hpp"
#include "test_support.hpp"

using namespace permeq;
using permeq::testing::complex_gaussian;
using permeq::testing::gaussian;

TEST(Svd, Diagonal) {
  Matrix d = Vector(Eigen::Vector2d(3, 1)).asDiagonal();
  auto s = svd(d);
  EXPECT_NEAR(s.singular_values[0], 3, 1e-14);
  EXPECT_NEAR(s.singular_values[1], 1, 1e-14);
  EXPECT_NEAR(s.u.cwiseAbs().diagonal().sum(), 2, 1e-14);
  EXPECT_NEAR(s.vt.cwiseAbs().diagonal().sum(), 2, 1e-14);
}

TEST(Svd, ZeroMatrix) {
  auto s = svd(Matrix(Matrix::Zero(3, 2)));
  EXPECT_EQ(s.singular_values.size(), 2);
  EXPECT_EQ(s.singular_values.maxCoeff(), 0.0);
}

TEST(Svd, ReconstructionAndOrthogonality) {
  std::mt19937_64 rng(10);
  for (auto [m, n] : {std::pair{4, 3}, {3, 4}, {6, 6}, {1, 5}}) {
    Matrix a = gaussian(rng, m, n);
    auto s = svd(a);
    Matrix sig = Matrix::Zero(m, n);
    for (int i = 0; i < s.singular_values.size(); ++i) sig(i, i) = s.singular_values[i];
    EXPECT_LE((s.u * sig * s.vt - a).norm(), 1e-10 * (1 + a.norm()));
    EXPECT_LE((s.u.transpose() * s.u - Matrix::Identity(m, m)).norm(), 1e-10);
    EXPECT_LE((s.vt * s.vt.transpose() - Matrix::Identity(n, n)).norm(), 1e-10);
    for (int i = 1; i < s.singular_values.size(); ++i) EXPECT_GE(s.singular_values[i - 1], s.singular_values[i]);
  }
}

TEST(Svd, RejectsNonFinite) {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(svd(a), NumericalError);
}

TEST(NumericRank, Examples) {
  EXPECT_EQ(numeric_rank(Matrix(Matrix::Identity(3, 3))), 3);
  Vector a(3), b(4);
  a << 1, 2, 3;
  b << -1, 0.5, 2, 7;
  EXPECT_EQ(numeric_rank(Matrix(a * b.transpose())), 1);
  Matrix d = Vector(Eigen::Vector2d(1, 1e-14)).asDiagonal();
  EXPECT_EQ(numeric_rank(d), 1);
  EXPECT_EQ(numeric_rank(Matrix(Matrix::Zero(3, 3))), 0);
}

TEST(Circulant, ShiftBlock) {
  Matrix c = circulant(Eigen::Vector4d(0, 0, 0, 1));
  Matrix expected(4, 4);
  expected << 0, 0, 0, 1,
              1, 0, 0, 0,
              0, 1, 0, 0,
              0, 0, 1, 0;
  EXPECT_EQ(c, expected);
  EXPECT_EQ(circulant(Vector::Constant(1, 2.5)), Matrix::Constant(1, 1, 2.5));
}

TEST(Circulant, Commute) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 7; ++n) {
    Matrix a = circulant(gaussian(rng, n, 1)), b = circulant(gaussian(rng, n, 1));
    EXPECT_LE((a * b - b * a).norm(), 1e-12);
    Vector e = Vector::Zero(n);
    e[n - 1] = 1;
    Matrix p = circulant(e);
    EXPECT_LE((a * p - p * a).norm(), 1e-12);
  }
}

TEST(Realize, Examples) {
  ComplexMatrix i1(1, 1);
  i1(0, 0) = {0, 1};
  Matrix expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_EQ(realize(i1), expected);
  ComplexMatrix r(1, 2);
  r << cdouble(2, 0), cdouble(-3, 0);
  Matrix er(2, 4);
  er << 2, 0, -3, 0,
        0, 2, 0, -3;
  EXPECT_EQ(realize(r), er);
}

TEST(Realize, RingHomomorphismAndRankDoubling) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix z = complex_gaussian(rng, 3, 3), w = complex_gaussian(rng, 3, 3);
    EXPECT_LE((realize(z * w) - realize(z) * realize(w)).norm(), 1e-10);
    EXPECT_LE((realize(z + w) - realize(z) - realize(w)).norm(), 1e-10);
    EXPECT_EQ(unrealize(realize(z)), z);
    ComplexMatrix lr = complex_gaussian(rng, 3, 1) * complex_gaussian(rng, 1, 3);
    EXPECT_EQ(numeric_rank(realize(lr)), 2 * numeric_rank(lr));
    ComplexMatrix z2 = complex_gaussian(rng, 2, 2);
    EXPECT_EQ(numeric_rank(realize(z2)), 2 * numeric_rank(z2));
  }
}

TEST(Unrealize, PatternChecks) {
  ComplexMatrix one = unrealize(Matrix::Identity(2, 2));
  EXPECT_EQ(one(0, 0), cdouble(1, 0));
  Matrix bad(2, 2);
  bad << 1, 0, 0, 2;
  EXPECT_THROW(unrealize(bad), StructuralError);
  Matrix big = Matrix::Identity(4, 4);
  big(2, 3) = 0.5;
  try {
    unrealize(big);
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_EQ(e.block_row(), 1);
    EXPECT_EQ(e.block_col(), 1);
  }
  EXPECT_THROW(unrealize(Matrix::Identity(3, 3)), StructuralError);
}

TEST(WeightedInner, Identities) {
  std::mt19937_64 rng(13);
  Matrix a = gaussian(rng, 3, 4), b = gaussian(rng, 3, 4), x = gaussian(rng, 4, 6);
  Matrix w = x * x.transpose();
  EXPECT_NEAR(weighted_inner(a, b, Matrix::Identity(4, 4)), (a.array() * b.array()).sum(), 1e-12);
  EXPECT_GE(weighted_inner(a, a, w), 0);
  Matrix s = psd_sqrt(w);
  EXPECT_NEAR(weighted_inner(a, b, w), ((a * s).array() * (b * s).array()).sum(), 1e-10 * (1 + w.norm()));
  Matrix asym = w;
  asym(0, 1) += 1;
  EXPECT_THROW(weighted_inner(a, b, asym), std::invalid_argument);
}

TEST(PsdSqrt, Examples) {
  EXPECT_LE((psd_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm(), 1e-14);
  Matrix d = Vector(Eigen::Vector2d(4, 9)).asDiagonal();
  Matrix e = Vector(Eigen::Vector2d(2, 3)).asDiagonal();
  EXPECT_LE((psd_sqrt(d) - e).norm(), 1e-14);
  std::mt19937_64 rng(14);
  Matrix x = gaussian(rng, 5, 9);
  Matrix w = x * x.transpose();
  auto f = psd_factor(w);
  EXPECT_LE((f.sqrt * f.sqrt - w).norm(), 1e-8 * w.norm());
  ASSERT_TRUE(f.invertible);
  EXPECT_LE((f.sqrt * f.inv_sqrt - Matrix::Identity(5, 5)).norm(), 1e-8);
  Matrix indef = Vector(Eigen::Vector2d(1, -1)).asDiagonal();
  EXPECT_THROW(psd_sqrt(indef), std::invalid_argument);
}

TEST(HermitianFactor, SquareRoot) {
  std::mt19937_64 rng(15);
  ComplexMatrix g = complex_gaussian(rng, 4, 6);
  ComplexMatrix h = g * g.adjoint();
  auto f = hermitian_factor(h);
  EXPECT_LE((f.sqrt * f.sqrt - h).norm(), 1e-9 * h.norm());
  EXPECT_LE((f.sqrt * f.inv_sqrt - ComplexMatrix::Identity(4, 4)).norm(), 1e-9);
}

TEST(MatrixIo, CsvRoundTripIsBitExact) {
  std::mt19937_64 rng(16);
  Matrix a = gaussian(rng, 4, 3);
  a(0, 0) = 0.1;
  a(1, 1) = -1e-300;
  a(2, 2) = 12345678.9;
  std::stringstream ss;
  write_csv(ss, a);
  EXPECT_EQ(read_csv(ss), a);
  EXPECT_EQ(matrix_from_json(matrix_to_json(a)), a);
  EXPECT_EQ(matrix_from_json(nlohmann::json::parse(matrix_to_json(a).dump())), a);
}

TEST(MatrixIo, ComplexEntries) {
  EXPECT_EQ(parse_complex("1.5-2i"), cdouble(1.5, -2));
  EXPECT_EQ(parse_complex("-3"), cdouble(-3, 0));
  EXPECT_EQ(parse_complex("-i"), cdouble(0, -1));
  EXPECT_EQ(parse_complex("2.5i"), cdouble(0, 2.5));
  EXPECT_EQ(parse_complex("1e-3+2e+2i"), cdouble(1e-3, 200));
  std::mt19937_64 rng(17);
  ComplexMatrix z = complex_gaussian(rng, 2, 3);
  std::stringstream ss;
  write_complex_csv(ss, z);
  EXPECT_EQ(read_complex_csv(ss), z);
  EXPECT_EQ(complex_matrix_from_json(complex_matrix_to_json(z)), z);
}

TEST(MatrixIo, RaggedRowsRejected) {
  std::stringstream ss("1,2\n3\n");
  EXPECT_THROW(read_csv(ss), std::runtime_error);
}
