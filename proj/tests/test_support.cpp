#include "test_support.hpp"

#include <algorithm>
#include <numeric>

namespace permeq::testing {

Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

ComplexMatrix complex_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = {nd(rng), nd(rng)};
  return m;
}

Permutation random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

// random permutation with a few cycles of mixed lengths
Permutation random_cycle_type(std::mt19937_64& rng, int max_n) {
  std::uniform_int_distribution<int> len(1, 6), cnt(1, 3);
  std::vector<int> lengths;
  int n = 0;
  const int k = cnt(rng);
  for (int i = 0; i < k; ++i) {
    int l = len(rng);
    if (n + l > max_n) break;
    lengths.push_back(l);
    n += l;
  }
  if (lengths.empty()) lengths.push_back(1), n = 1;
  std::vector<int> image(n);
  int off = 0;
  for (int l : lengths) {
    for (int t = 0; t < l; ++t) image[off + t] = off + (t + 1) % l + 1;
    off += l;
  }
  // relabel at random so cycles are not on consecutive labels
  Permutation c(image);
  Permutation g = random_permutation(rng, n);
  return g.compose(c).compose(g.inverse());
}

RankVector random_real_vector(std::mt19937_64& rng, const BlockSpectrum& s) {
  std::vector<int> v;
  for (const auto& b : s.real_blocks) v.push_back(std::uniform_int_distribution<int>(0, b.size)(rng));
  return make_rank_vector(s, Field::real, v);
}

// Flatten per-block factors to one real parameter vector and back.
std::vector<double*> parameters(BlockFactors& f) {
  std::vector<double*> out;
  for (auto& m : f.real_a)
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
  for (auto& m : f.real_b)
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
  for (auto* list : {&f.pair_a, &f.pair_b})
    for (auto& m : *list)
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        auto* z = reinterpret_cast<double*>(m.data() + i);
        out.push_back(z);
        out.push_back(z + 1);
      }
  return out;
}

Matrix product(const RealBaseChange& q, const RankVector& v, const BlockFactors& f) {
  auto c = assemble_component(q, v, f);
  return c.decoder * c.encoder;
}

}  // namespace permeq::testing
