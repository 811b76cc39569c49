#include "permeq/demo.hpp"

#include <algorithm>
#include <random>

#include "permeq/equivariant.hpp"
#include "permeq/spectral.hpp"

namespace permeq {

Matrix shift_dataset(const DemoConfig& cfg) {
  if (cfg.height < 1 || cfg.width < 1 || cfg.samples < 1) throw std::invalid_argument("demo: empty image or sample set");
  const int h = cfg.height, w = cfg.width;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> level(0.5, 1.0);
  std::normal_distribution<double> nd(0.0, cfg.noise);
  Matrix x(h * w, cfg.samples);
  Matrix img(h, w);
  for (int s = 0; s < cfg.samples; ++s) {
    img.setZero();
    const int hbars = std::uniform_int_distribution<int>(0, 2)(rng);
    const int vbars = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int b = 0; b < hbars; ++b) {
      const int thick = std::uniform_int_distribution<int>(1, std::max(1, h / 8))(rng);
      const int top = std::uniform_int_distribution<int>(0, h - 1)(rng);
      const double v = level(rng);
      for (int i = top; i < std::min(h, top + thick); ++i) img.row(i).array() += v;
    }
    for (int b = 0; b < vbars; ++b) {
      const int thick = std::uniform_int_distribution<int>(std::max(1, w / 16), std::max(1, w / 5))(rng);
      const int left = std::uniform_int_distribution<int>(0, w - 1)(rng);
      const int top = std::uniform_int_distribution<int>(0, h / 2)(rng);
      const int len = std::uniform_int_distribution<int>(h / 2, h)(rng);
      const double v = level(rng);
      for (int j = left; j < std::min(w, left + thick); ++j)
        for (int i = top; i < std::min(h, top + len); ++i) img(i, j) += v;
    }
    const int shift = std::uniform_int_distribution<int>(0, w - 1)(rng);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) x(i * w + (j + shift) % w, s) = img(i, j) + nd(rng);
  }
  return x;
}

DemoReport run_shift_demo(const DemoConfig& cfg) { return run_shift_demo(cfg, shift_dataset(cfg)); }

DemoReport run_shift_demo(const DemoConfig& cfg, const Matrix& x) {
  const int n = cfg.height * cfg.width;
  if (x.rows() != n) throw std::invalid_argument("demo: data has " + std::to_string(x.rows()) + " rows, expected " +
                                                 std::to_string(n));
  DemoReport rep;
  rep.config = cfg;
  rep.n = n;
  rep.rank = cfg.rank > 0 ? cfg.rank : std::max(1, n / 4);
  if (rep.rank > n) throw std::invalid_argument("demo: rank exceeds the number of pixels");
  const Permutation p = grid_horizontal_shift(cfg.height, cfg.width);
  const double scale = static_cast<double>(n) * static_cast<double>(x.cols());

  const EquivariantProblem prob = prepare_equivariant(x, x, p);
  const BlockSpectrum& s = prob.q.layout;
  const auto slots = component_slots(s, Field::real);
  const auto order = frequency_order(s);
  const Matrix xt = prob.q.inverse * x;
  for (int i : order) {
    const auto& b = s.real_blocks[i];
    rep.block_labels.push_back("(" + std::to_string(b.l) + "," + std::to_string(b.m) + ")");
    rep.block_energy.push_back(xt.middleRows(b.offset, b.dim()).squaredNorm());
  }

  auto row_for = [&](const std::string& name, const RankVector& v) {
    DemoRow row;
    row.name = name;
    for (int i : order) row.ranks.push_back(v.entries[i].rank);
    row.total_rank = v.total_rank;
    row.parameters = weight_sharing(s, v).free_parameters();
    row.loss = squared_loss(equivariant_minimizer(prob, v), x, x);
    row.loss_per_pixel = row.loss / scale;
    return row;
  };

  {
    const FitResult dense = fit_rank_bounded(x, x, rep.rank);
    DemoRow row;
    row.name = "dense";
    row.total_rank = rep.rank;
    row.parameters = 2LL * n * rep.rank;
    row.loss = dense.loss;
    row.loss_per_pixel = dense.loss / scale;
    rep.rows.push_back(row);
  }

  FitOptions opt;
  opt.mode = SearchMode::budget_dp;
  const FitResult best = fit_equivariant(x, x, p, rep.rank, opt);
  rep.rows.push_back(row_for("equivariant", *best.component));

  int weight_sum = 0;
  for (const auto& sl : slots) weight_sum += sl.weight;
  const int q = rep.rank / weight_sum;
  std::vector<int> equal;
  for (const auto& sl : slots) equal.push_back(std::min(q, sl.bound));
  rep.rows.push_back(row_for("equal_rank", make_rank_vector(s, Field::real, equal)));

  std::vector<int> high(slots.size());
  for (std::size_t t = 0; t < order.size(); ++t)
    high[order[t]] = static_cast<int>(t) < cfg.high_pass_zero_blocks ? 0 : slots[order[t]].bound;
  rep.rows.push_back(row_for("high_pass", make_rank_vector(s, Field::real, high)));

  rep.ordering_holds = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    rep.ordering_holds = rep.ordering_holds && rep.rows[i - 1].loss <= rep.rows[i].loss;
  return rep;
}

}  // namespace permeq
