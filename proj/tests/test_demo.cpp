#include <gtest/gtest.h>

#include "permeq/demo.hpp"

using namespace permeq;

TEST(Demo, DatasetIsDeterministic) {
  DemoConfig cfg;
  cfg.height = 8;
  cfg.width = 8;
  cfg.samples = 50;
  const Matrix a = shift_dataset(cfg), b = shift_dataset(cfg);
  EXPECT_EQ(a.rows(), 64);
  EXPECT_EQ(a.cols(), 50);
  EXPECT_EQ((a - b).norm(), 0.0);
  cfg.seed = 2;
  EXPECT_GT((shift_dataset(cfg) - a).norm(), 0.0);
}

TEST(Demo, LossOrdering) {
  for (int seed : {1, 2, 3}) {
    DemoConfig cfg;
    cfg.height = 12;
    cfg.width = 12;
    cfg.samples = 400;
    cfg.seed = seed;
    const DemoReport rep = run_shift_demo(cfg);
    ASSERT_EQ(rep.rows.size(), 4u);
    EXPECT_EQ(rep.rank, 36);
    EXPECT_TRUE(rep.ordering_holds) << "seed " << seed;
    EXPECT_EQ(rep.rows[0].name, "dense");
    EXPECT_EQ(rep.rows[1].total_rank, 36);
    EXPECT_LE(rep.rows[2].total_rank, 36);
    // the equivariant rows share weights; dense does not
    EXPECT_LT(rep.rows[1].parameters, rep.rows[0].parameters);
  }
}

TEST(Demo, RejectsBadShape) {
  DemoConfig cfg;
  cfg.height = 4;
  cfg.width = 4;
  EXPECT_THROW(run_shift_demo(cfg, Matrix::Zero(15, 10)), std::invalid_argument);
  cfg.rank = 17;
  EXPECT_THROW(run_shift_demo(cfg), std::invalid_argument);
}
