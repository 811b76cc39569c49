#include <gtest/gtest.h>

#include <random>

#include "permeq/invariant.hpp"
#include "permeq/optimize.hpp"
#include "permeq/oracle.hpp"
#include "test_support.hpp"

using namespace permeq;
using permeq::testing::gaussian;
using permeq::testing::random_permutation;
using permeq::testing::rotation9;

namespace {

Matrix pmat(const Permutation& p) { return permutation_matrix(p).cast<double>(); }

Matrix random_invariant(std::mt19937_64& rng, const InvariantSpace& s, int rank) {
  return psi_expand(Matrix(gaussian(rng, s.m, rank) * gaussian(rng, rank, s.k())), s.partition);
}

}  // namespace

TEST(InvariantSpace, PartitionFromGenerators) {
  EXPECT_EQ(invariant_space({parse_permutation("(1 3 4)(2 5)", 5)}, 2, 5, 1).k(), 2);
  for (int p = 2; p <= 7; ++p) EXPECT_EQ(invariant_space({grid_rotation(p)}, 1, p * p, 1).k(), (p * p + 3) / 4) << p;
  EXPECT_EQ(invariant_space({Permutation::identity(4)}, 3, 4, 2).k(), 4);
  EXPECT_THROW(invariant_space({Permutation::identity(4)}, 3, 5, 2), std::invalid_argument);
}

TEST(InvariantSpace, MultipleGeneratorsCoarsen) {
  auto s = invariant_space({parse_permutation("(1 2)", 4), parse_permutation("(2 3)", 4)}, 2, 4, 1);
  EXPECT_EQ(s.partition.to_string(), "{{1,2,3},{4}}");
}

TEST(Psi, CompressExample) {
  const Partition part = Partition::from_blocks(5, {{1, 3, 4}, {2, 5}});
  Matrix m(2, 5);
  m << 1, 3, 1, 1, 3, 2, 4, 2, 2, 4;
  Matrix c(2, 2);
  c << 1, 3, 2, 4;
  EXPECT_EQ(psi_compress(m, part), c);
  EXPECT_EQ(psi_expand(c, part), m);
  m(0, 3) = 1.5;
  try {
    psi_compress(m, part);
    FAIL();
  } catch (const InvarianceViolation& e) {
    EXPECT_EQ(e.block(), 0);
    EXPECT_NEAR(e.deviation(), 0.5, 1e-15);
  }
}

TEST(Psi, ReplicationExample) {
  const Partition part = Partition::from_blocks(4, {{1, 3}, {2}, {4}});
  std::mt19937_64 rng(3);
  const Matrix c = gaussian(rng, 4, 3);
  const Matrix m = psi_expand(c, part);
  EXPECT_TRUE(m.isApprox(c * replication_matrix(part).cast<double>(), 0));
  EXPECT_EQ(psi_expand(Matrix::Zero(4, 3), part), Matrix::Zero(4, 4));
  const Partition single = Partition::singletons(3);
  const Matrix g = gaussian(rng, 2, 3);
  EXPECT_EQ(psi_compress(g, single), g);
}

TEST(Psi, RoundTripAndInvariance) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    const Permutation p = random_permutation(rng, n);
    const auto s = invariant_space({p}, 3, n, 2);
    const Matrix m = random_invariant(rng, s, 2);
    EXPECT_EQ(psi_expand(psi_compress(m, s.partition), s.partition), m);
    EXPECT_LE((m * pmat(p) - m).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(InvariantNumbers, DimensionAndDegree) {
  InvariantSpace s;
  s.m = 2;
  s.n = 5;
  s.r = 1;
  s.partition = Partition::from_blocks(5, {{1, 3, 4}, {2, 5}});
  EXPECT_EQ(invariant_dimension(s), 3);
  EXPECT_EQ(invariant_degree(s), 2);
  s.r = 2;
  EXPECT_EQ(invariant_degree(s), 1);
  s.m = 3;
  s.partition = Partition::singletons(3);
  s.n = 3;
  EXPECT_EQ(invariant_degree(s), 3);
}

TEST(Singularity, RankDrop) {
  std::mt19937_64 rng(7);
  const auto s = invariant_space({parse_permutation("(1 2)(3 4)", 6)}, 4, 6, 2);  // k = 4
  EXPECT_FALSE(is_singular_point(s, random_invariant(rng, s, 2)));
  EXPECT_TRUE(is_singular_point(s, random_invariant(rng, s, 1)));
  EXPECT_TRUE(is_singular_point(s, Matrix::Zero(4, 6)));
  const auto full = invariant_space({parse_permutation("(1 2)(3 4)", 6)}, 4, 6, 4);
  EXPECT_FALSE(is_singular_point(full, Matrix::Zero(4, 6)));
  EXPECT_THROW(is_singular_point(s, gaussian(rng, 4, 6)), InvarianceViolation);
}

TEST(Autoencoder, SmallExampleFullRank) {
  const Partition part = Partition::from_blocks(4, {{1, 3}, {2}, {4}});
  Matrix c(4, 3);
  c << 1, 2, 0, 0, 1, 3, 2, 0, 1, 1, 1, 1;
  InvariantSpace s;
  s.m = 4;
  s.n = 4;
  s.r = 3;
  s.partition = part;
  const auto f = invariant_autoencoder(s, psi_expand(c, part));
  EXPECT_EQ(f.decoder, c);
  EXPECT_EQ(f.encoder, replication_matrix(part).cast<double>());
}

TEST(Autoencoder, LowRankFactorsShareWeights) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const int n = std::uniform_int_distribution<int>(3, 10)(rng);
    const auto s = invariant_space({random_permutation(rng, n)}, 4, n, std::min(2, n));
    const int rr = s.effective_rank();
    const Matrix m = random_invariant(rng, s, std::uniform_int_distribution<int>(0, rr)(rng));
    const auto f = invariant_autoencoder(s, m);
    EXPECT_EQ(f.decoder.cols(), rr);
    EXPECT_LE((f.decoder * f.encoder - m).norm(), 1e-9 * (1 + m.norm()));
    // columns equal inside a block and exactly k distinct columns
    EXPECT_NO_THROW(psi_compress(f.encoder, s.partition, 1e-12));
    const Matrix enc_c = psi_compress(f.encoder, s.partition, 1e-12);
    for (int a = 0; a < s.k(); ++a)
      for (int b = a + 1; b < s.k(); ++b) EXPECT_GT((enc_c.col(a) - enc_c.col(b)).norm(), 1e-9);
  }
}

TEST(Autoencoder, RankExceedsBound) {
  std::mt19937_64 rng(13);
  const auto s = invariant_space({Permutation::identity(4)}, 4, 4, 1);
  EXPECT_THROW(invariant_autoencoder(s, gaussian(rng, 4, 4)), std::invalid_argument);
}

TEST(FitInvariant, RecoversConsistentData) {
  std::mt19937_64 rng(15);
  const Permutation p = parse_permutation("(1 2 3)(4 5)", 7);
  const auto s = invariant_space({p}, 3, 7, 2);
  const Matrix m0 = random_invariant(rng, s, 2);
  const Matrix x = gaussian(rng, 7, 20);
  const FitResult fit = fit_invariant(x, m0 * x, s);
  EXPECT_LE(fit.loss, 1e-16 * (1 + (m0 * x).squaredNorm()));
  EXPECT_LE((fit.minimizer - m0).norm(), 1e-8);
  EXPECT_LE((fit.minimizer * pmat(p) - fit.minimizer).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(fit.compact.cols(), s.k());
}

TEST(FitInvariant, SingletonsAndIdentityData) {
  std::mt19937_64 rng(17);
  const auto s = invariant_space({Permutation::identity(5)}, 4, 5, 2);
  const Matrix y = gaussian(rng, 4, 5);
  const FitResult fit = fit_invariant(Matrix::Identity(5, 5), y, s);
  EXPECT_LE((fit.minimizer - eckart_young(y, 2).truncated).norm(), 1e-10);
}

TEST(FitInvariant, MatchesAlsOracle) {
  std::mt19937_64 rng(19);
  // 4x6 maps, k = 3, r = 2
  const Permutation p = parse_permutation("(1 2)(3 4 5)", 6);
  const auto s = invariant_space({p}, 4, 6, 2);
  ASSERT_EQ(s.k(), 3);
  for (int t = 0; t < 5; ++t) {
    const Matrix x = gaussian(rng, 6, 15), y = gaussian(rng, 4, 15);
    const FitResult fit = fit_invariant(x, y, s);
    AlsOptions opt;
    opt.seed = 100 + t;
    const OracleFit o = als_bilinear(invariant_model(s.partition, 4, 2), x, y, opt);
    EXPECT_NEAR(fit.loss, o.loss, 1e-6 * (1 + o.loss));
    EXPECT_LE(numeric_rank(fit.minimizer), 2);
  }
}

TEST(FitInvariant, RankDeficientNeedsRidge) {
  std::mt19937_64 rng(21);
  const auto s = invariant_space({parse_permutation("(1 2)", 4)}, 2, 4, 1);
  const Matrix x = gaussian(rng, 4, 3);  // d < n
  const Matrix y = gaussian(rng, 2, 3);
  EXPECT_THROW(fit_invariant(x, y, s), RankDeficientData);
  const FitResult fit = fit_invariant(x, y, s, 0.1);
  ASSERT_TRUE(fit.ridge.has_value());
  EXPECT_DOUBLE_EQ(*fit.ridge, 0.1);
  EXPECT_NEAR(fit.loss, squared_loss(fit.minimizer, x, y), 1e-12);
}

TEST(FitInvariant, CriticalCountMatchesDegree) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const int m = std::uniform_int_distribution<int>(1, 5)(rng);
    const Permutation p = random_permutation(rng, 7);
    const int r = std::uniform_int_distribution<int>(0, 4)(rng);
    const auto s = invariant_space({p}, m, 7, std::min(r, m));
    if (s.k() > 5) continue;
    const Matrix x = gaussian(rng, 7, 12), y = gaussian(rng, m, 12);
    // compressed weighted problem, enumerate Eckart-Young subsets and count distinct losses
    const Matrix xc = compress_rows(x, s.partition);
    const SelTarget tg = sel_to_target(xc, y);
    const PsdFactor wf = psd_factor(tg.weight);
    const int rr = std::min(s.effective_rank(), std::min(m, s.k()));
    const auto ey = eckart_young(tg.u * wf.sqrt, rr, true);
    std::vector<double> losses;
    for (const auto& c : ey.critical) losses.push_back(squared_loss(psi_expand(Matrix(c * wf.inv_sqrt), s.partition), x, y));
    std::sort(losses.begin(), losses.end());
    int distinct = losses.empty() ? 0 : 1;
    for (std::size_t i = 1; i < losses.size(); ++i) distinct += losses[i] - losses[i - 1] > 1e-9 * (1 + losses[i]);
    EXPECT_EQ(BigInt(distinct), ed_degree_invariant(m, s.k(), s.r)) << "m=" << m << " k=" << s.k() << " r=" << s.r;
  }
}
