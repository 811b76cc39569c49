#include <gtest/gtest.h>

#include <random>

#include "permeq/oracle.hpp"
#include "permeq/spectral.hpp"
#include "test_support.hpp"

using namespace permeq;
using permeq::testing::random_permutation;
using permeq::testing::rotation9;

namespace {

Matrix pmat(const Permutation& p) { return permutation_matrix(p).cast<double>(); }

}  // namespace

TEST(Multiplicities, RotationExample) {
  auto s = eigen_multiplicities(cycle_decomposition(rotation9()));
  EXPECT_EQ(s.d(1), 3);
  EXPECT_EQ(s.d(2), 2);
  EXPECT_EQ(s.d(4), 2);
  EXPECT_EQ(s.multiplicities.size(), 3u);
  ASSERT_EQ(s.real_blocks.size(), 3u);
  EXPECT_EQ(s.real_blocks[2].l, 4);
  EXPECT_EQ(s.real_blocks[2].m, 3);
}

TEST(Multiplicities, TwentyEightCycles) {
  auto s = spectrum_from_lengths(std::vector<int>(28, 28));
  for (int l : {1, 2, 4, 7, 14, 28}) EXPECT_EQ(s.d(l), 28) << l;
  EXPECT_EQ(s.multiplicities.size(), 6u);
  int pairs = 0;
  for (const auto& b : s.real_blocks) pairs += b.kind == RealKind::complex_pair;
  EXPECT_EQ(pairs, 13);
  EXPECT_EQ(s.real_blocks.size(), 15u);
}

TEST(Multiplicities, Identity) {
  auto s = eigen_multiplicities(cycle_decomposition(Permutation::identity(5)));
  EXPECT_EQ(s.multiplicities.size(), 1u);
  EXPECT_EQ(s.d(1), 5);
}

TEST(Multiplicities, LayoutSumsAndRecount) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = random_permutation(rng, 1 + trial % 30);
    auto c = cycle_decomposition(p);
    auto s = eigen_multiplicities(c);
    int sum_c = 0, sum_r = 0;
    for (const auto& b : s.complex_blocks) sum_c += b.size;
    for (const auto& b : s.real_blocks) sum_r += b.dim();
    EXPECT_EQ(sum_c, p.n());
    EXPECT_EQ(sum_r, p.n());
    for (const auto& [l, d] : s.multiplicities) {
      int count = 0;
      for (int len : c.lengths()) count += len % l == 0;
      EXPECT_EQ(d, count);
    }
    // one pair block per {m, l-m} with l >= 3
    for (const auto& [l, d] : s.multiplicities) {
      if (l < 3) continue;
      int pairs = 0;
      for (const auto& b : s.real_blocks) pairs += b.l == l;
      EXPECT_EQ(pairs, euler_phi(l) / 2);
    }
  }
}

TEST(CommutantDimension, Examples) {
  EXPECT_EQ(commutant_dimension(cycle_decomposition(rotation9())), 21);
  EXPECT_EQ(commutant_dimension(cycle_decomposition(Permutation::identity(6))), 36);
  for (int n = 1; n <= 8; ++n) {
    auto p = cycle_type_permutation(1, n);
    EXPECT_EQ(commutant_dimension(cycle_decomposition(p)), n);
    EXPECT_EQ(nullspace_commutant_dim({p}), n);
  }
}

TEST(CommutantDimension, MatchesNullspaceOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    auto p = random_permutation(rng, 1 + trial % 12);
    EXPECT_EQ(commutant_dimension(cycle_decomposition(p)), nullspace_commutant_dim({p}));
  }
}

TEST(ComplexBaseChange, SmallExample) {
  Permutation p({3, 5, 4, 1, 2});
  auto bc = complex_base_change(p);
  const cdouble z3 = std::polar(1.0, 2 * M_PI / 3);
  std::vector<cdouble> expected{1, z3 * z3, z3, 1, -1};
  ASSERT_EQ(bc.step2_diagonal.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_LE(std::abs(bc.step2_diagonal[i] - expected[i]), 1e-12) << i;
  // the Vandermonde block
  EXPECT_LE(std::abs(bc.t2(1, 1) - z3), 1e-12);
  EXPECT_LE(std::abs(bc.t2(2, 1) - z3 * z3), 1e-12);
  EXPECT_LE(std::abs(bc.t2(4, 4) - cdouble(-1)), 1e-12);
  // step-1 block is the circulant shift
  Matrix t1 = bc.t1.cast<double>();
  Matrix c = t1.transpose() * pmat(p) * t1;
  EXPECT_EQ(c.block(0, 0, 3, 3), circulant(Eigen::Vector3d(0, 0, 1)));
  ComplexMatrix pc = pmat(p).cast<cdouble>();
  EXPECT_LE((bc.matrix * bc.inverse - ComplexMatrix::Identity(5, 5)).norm(), 1e-10);
  EXPECT_LE((bc.inverse * pc * bc.matrix - complex_block_form(bc.layout)).norm(), 1e-10);
}

TEST(ComplexBaseChange, IdentityIsTrivial) {
  auto bc = complex_base_change(Permutation::identity(4));
  EXPECT_LE((bc.matrix - ComplexMatrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(ComplexBaseChange, RotationEigenvaluesMatchDirectEigensolver) {
  auto p = rotation9();
  auto bc = complex_base_change(p);
  Eigen::EigenSolver<Matrix> es(pmat(p));
  auto count = [](const auto& values, cdouble target) {
    int c = 0;
    for (auto v : values) c += std::abs(cdouble(v) - target) < 1e-8;
    return c;
  };
  std::vector<cdouble> direct(es.eigenvalues().data(), es.eigenvalues().data() + 9);
  for (auto [val, mult] : {std::pair{cdouble(1, 0), 3}, {cdouble(-1, 0), 2}, {cdouble(0, 1), 2}, {cdouble(0, -1), 2}}) {
    EXPECT_EQ(count(direct, val), mult);
    EXPECT_EQ(count(bc.step2_diagonal, val), mult);
  }
  EXPECT_LE((bc.inverse * pmat(p).cast<cdouble>() * bc.matrix - complex_block_form(bc.layout)).norm(), 1e-10);
}

TEST(RealBaseChange, RotationForm) {
  auto bc = real_base_change(rotation9());
  Matrix expected = Matrix::Zero(9, 9);
  expected.topLeftCorner(3, 3).setIdentity();
  expected.block(3, 3, 2, 2) = -Matrix::Identity(2, 2);
  for (int b = 0; b < 2; ++b) {
    expected(5 + 2 * b, 6 + 2 * b) = -1;
    expected(6 + 2 * b, 5 + 2 * b) = 1;
  }
  EXPECT_LE((bc.matrix.transpose() * pmat(rotation9()) * bc.matrix - expected).norm(), 1e-12);
  EXPECT_LE((real_block_form(bc.layout) - expected).norm(), 1e-15);
}

TEST(RealBaseChange, FourCycleKnownBasis) {
  auto bc = real_base_change(parse_permutation("(1 4 3 2)", 4));
  const double r = std::sqrt(2.0);
  Matrix o(4, 4);
  o << 1, 1, r, 0,
       1, -1, 0, r,
       1, 1, -r, 0,
       1, -1, 0, -r;
  o /= 2;
  EXPECT_LE((bc.matrix - o).norm(), 1e-14);
}

TEST(RealBaseChange, Identity) {
  auto bc = real_base_change(Permutation::identity(5));
  EXPECT_LE((bc.matrix - Matrix::Identity(5, 5)).norm(), 1e-15);
}

TEST(RealBaseChange, RandomPermutationsConjugate) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    auto p = random_permutation(rng, 1 + trial);
    auto bc = real_base_change(p);
    const int n = p.n();
    EXPECT_LE((bc.matrix.transpose() * bc.matrix - Matrix::Identity(n, n)).norm(), 1e-10);
    EXPECT_LE((bc.matrix.transpose() * pmat(p) * bc.matrix - real_block_form(bc.layout)).norm(), 1e-9);
    auto cb = complex_base_change(p);
    EXPECT_LE((cb.inverse * pmat(p).cast<cdouble>() * cb.matrix - complex_block_form(cb.layout)).norm(), 1e-9);
  }
}

TEST(RealBaseChange, BlocksHaveDisjointEigenvalues) {
  auto s = spectrum_from_lengths({12, 8, 6, 5, 3, 1});
  for (std::size_t a = 0; a < s.real_blocks.size(); ++a)
    for (std::size_t b = a + 1; b < s.real_blocks.size(); ++b) {
      cdouble x = s.real_blocks[a].rotation(), y = s.real_blocks[b].rotation();
      EXPECT_GT(std::abs(x - y), 1e-6);
      EXPECT_GT(std::abs(x - std::conj(y)), 1e-6);
    }
}
