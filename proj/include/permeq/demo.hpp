#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permeq/linalg.hpp"
#include "permeq/optimize.hpp"
#include "permeq/perm.hpp"

namespace permeq {

struct DemoConfig {
  int height = 32, width = 32;
  int samples = 2000;
  std::uint64_t seed = 1;
  double noise = 0.05;
  int rank = 0;               // 0: height * width / 4
  int high_pass_zero_blocks = 7;
};

// Bars images (pixel label = row * width + col + 1), each cyclically shifted by a random number of
// columns, plus Gaussian noise. Columns are samples.
Matrix shift_dataset(const DemoConfig& cfg);

struct DemoRow {
  std::string name;
  std::vector<int> ranks;  // per real block, frequency order; empty for the dense fit
  int total_rank = 0;
  std::int64_t parameters = 0;
  double loss = 0;
  double loss_per_pixel = 0;  // loss / (n * samples)
};

struct DemoReport {
  DemoConfig config;
  int n = 0, rank = 0;
  std::vector<std::string> block_labels;  // frequency order
  std::vector<double> block_energy;       // squared norm of Q^T X per block, frequency order
  std::vector<DemoRow> rows;              // dense, equivariant, equal_rank, high_pass
  bool ordering_holds = false;            // dense <= equivariant <= equal_rank <= high_pass
};

// Autoencoder setting Y = X, shift permutation on the rows of the image.
DemoReport run_shift_demo(const DemoConfig& cfg);
DemoReport run_shift_demo(const DemoConfig& cfg, const Matrix& x);

}  // namespace permeq
