#include "permeq/equivariant.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace permeq {

std::vector<int> RankVector::values() const {
  std::vector<int> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e.rank);
  return v;
}

std::string RankVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries.size(); ++i) os << (i ? "," : "") << entries[i].rank;
  os << ')';
  return os.str();
}

std::vector<Slot> component_slots(const BlockSpectrum& s, Field f) {
  std::vector<Slot> out;
  if (f == Field::complex) {
    for (const auto& b : s.complex_blocks) out.push_back({b.l, b.m, b.size, 1, RealKind::real_plus});
  } else {
    for (const auto& b : s.real_blocks)
      out.push_back({b.l, b.m, b.size, b.kind == RealKind::complex_pair ? 2 : 1, b.kind});
  }
  return out;
}

RankVector make_rank_vector(const BlockSpectrum& s, Field f, const std::vector<int>& values) {
  auto slots = component_slots(s, f);
  if (values.size() != slots.size())
    throw std::invalid_argument("rank vector needs " + std::to_string(slots.size()) + " entries, got " +
                                std::to_string(values.size()));
  RankVector v;
  v.field = f;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (values[i] < 0 || values[i] > slots[i].bound)
      throw std::invalid_argument("rank " + std::to_string(values[i]) + " outside [0," +
                                  std::to_string(slots[i].bound) + "] for block (" + std::to_string(slots[i].l) +
                                  "," + std::to_string(slots[i].m) + ")");
    v.entries.push_back({slots[i].l, slots[i].m, values[i]});
    v.total_rank += slots[i].weight * values[i];
  }
  return v;
}

RankVector parse_rank_vector(const BlockSpectrum& s, Field f, const std::string& text) {
  std::vector<int> values;
  std::string cleaned;
  for (char c : text) cleaned += (c == '(' || c == ')') ? ' ' : c;
  std::stringstream ss(cleaned);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    values.push_back(v);
  }
  return make_rank_vector(s, f, values);
}

IntMatrix orbital_labels(const std::vector<Permutation>& gens, int* count) {
  if (gens.empty()) throw std::invalid_argument("orbital_labels: no generators");
  const int n = gens.front().n();
  for (const auto& g : gens)
    if (g.n() != n) throw std::invalid_argument("generators act on different sets");
  IntMatrix label = IntMatrix::Constant(n, n, -1);
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (label(i, j) >= 0) continue;
      label(i, j) = next;
      stack.push_back({i, j});
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        for (const auto& g : gens) {
          // M[sigma(a)][sigma(b)] = M[a][b]; the orbit is closed under each generator since the group is finite
          const int ga = g(a + 1) - 1, gb = g(b + 1) - 1;
          if (label(ga, gb) < 0) {
            label(ga, gb) = next;
            stack.push_back({ga, gb});
          }
        }
      }
      ++next;
    }
  if (count) *count = next;
  return label;
}

std::vector<Matrix> commutant_basis(const std::vector<Permutation>& gens) {
  int count = 0;
  IntMatrix label = orbital_labels(gens, &count);
  const int n = static_cast<int>(label.rows());
  std::vector<Matrix> basis(count, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) basis[label(i, j)](i, j) = 1;
  return basis;
}

double commutator_deviation(const Matrix& m, const Permutation& p) {
  if (m.rows() != p.n() || m.cols() != p.n()) throw std::invalid_argument("commutator: shape mismatch");
  double worst = 0;
  for (int i = 1; i <= p.n(); ++i)
    for (int j = 1; j <= p.n(); ++j) worst = std::max(worst, std::abs(m(p(i) - 1, p(j) - 1) - m(i - 1, j - 1)));
  return worst;
}

bool is_equivariant(const Matrix& m, const Permutation& p, double tol) {
  return commutator_deviation(m, p) <= tol * (1.0 + m.norm());
}

bool check_circulant_blocks(const Matrix& m, const Permutation& p, double tol) {
  if (m.rows() != p.n() || m.cols() != p.n()) return false;
  const auto order = cycle_sort_order(p);
  const auto lengths = cycle_decomposition(p).lengths();
  std::vector<int> start(lengths.size());
  for (std::size_t i = 1; i < lengths.size(); ++i) start[i] = start[i - 1] + lengths[i - 1];
  const double thr = tol * (1.0 + m.norm());
  auto at = [&](int r, int c) { return m(order[r], order[c]); };
  for (std::size_t a = 0; a < lengths.size(); ++a)
    for (std::size_t b = 0; b < lengths.size(); ++b) {
      const int la = lengths[a], lb = lengths[b];
      for (int i = 0; i < la; ++i)
        for (int j = 0; j < lb; ++j) {
          // each row is the previous one shifted right, each column the previous one shifted down
          double here = at(start[a] + i, start[b] + j);
          double next = at(start[a] + (i + 1) % la, start[b] + (j + 1) % lb);
          if (std::abs(here - next) > thr) return false;
        }
    }
  return true;
}

BigInt count_components(const BlockSpectrum& s, int r, Field f) {
  if (r < 0) return 0;
  std::vector<BigInt> ways(r + 1);
  ways[0] = 1;
  for (const auto& slot : component_slots(s, f)) {
    std::vector<BigInt> next(r + 1);
    for (int t = 0; t <= r; ++t) {
      if (ways[t] == 0) continue;
      for (int x = 0; x <= slot.bound && t + slot.weight * x <= r; ++x) next[t + slot.weight * x] += ways[t];
    }
    ways.swap(next);
  }
  return ways[r];
}

void for_each_component(const BlockSpectrum& s, int r, Field f, const std::function<bool(const RankVector&)>& visit) {
  if (r < 0) return;
  const auto slots = component_slots(s, f);
  const std::size_t k = slots.size();
  // reach[i][t]: the slots i.. can realize total t exactly
  std::vector<std::vector<char>> reach(k + 1, std::vector<char>(r + 1, 0));
  reach[k][0] = 1;
  for (std::size_t i = k; i-- > 0;)
    for (int t = 0; t <= r; ++t)
      for (int x = 0; x <= slots[i].bound && slots[i].weight * x <= t; ++x)
        if (reach[i + 1][t - slots[i].weight * x]) {
          reach[i][t] = 1;
          break;
        }
  if (!reach[0][r]) return;
  RankVector cur;
  cur.field = f;
  cur.total_rank = r;
  for (const auto& sl : slots) cur.entries.push_back({sl.l, sl.m, 0});
  bool stop = false;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
    if (stop) return;
    if (i == k) {
      if (!visit(cur)) stop = true;
      return;
    }
    const int top = std::min(slots[i].bound, remaining / slots[i].weight);
    for (int x = top; x >= 0 && !stop; --x) {
      if (!reach[i + 1][remaining - slots[i].weight * x]) continue;
      cur.entries[i].rank = x;
      rec(i + 1, remaining - slots[i].weight * x);
    }
    cur.entries[i].rank = 0;
  };
  rec(0, r);
}

std::vector<ComponentDescriptor> enumerate_components(const BlockSpectrum& s, int r, Field f, const BigInt& limit) {
  BigInt total = count_components(s, r, f);
  if (total > limit)
    throw LimitExceeded("component count " + total.str() + " exceeds limit " + limit.str(), total);
  std::vector<ComponentDescriptor> out;
  for_each_component(s, r, f, [&](const RankVector& v) {
    out.push_back(describe_component(s, v));
    return true;
  });
  return out;
}

std::int64_t component_dimension(const BlockSpectrum& s, const RankVector& v) {
  const auto slots = component_slots(s, v.field);
  if (slots.size() != v.entries.size()) throw std::invalid_argument("rank vector does not match spectrum");
  std::int64_t dim = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::int64_t d = slots[i].bound, r = v.entries[i].rank;
    dim += static_cast<std::int64_t>(slots[i].weight) * (2 * d - r) * r;
  }
  return dim;
}

BigInt determinantal_degree(int m, int n, int r) {
  if (r < 0) return 0;
  if (r >= std::min(m, n)) return 1;
  if (r == 0) return 1;  // the origin
  BigInt num = 1, den = 1;
  for (int i = 0; i <= n - r - 1; ++i) {
    num *= factorial(m + i) * factorial(i);
    den *= factorial(r + i) * factorial(m - r + i);
  }
  return num / den;
}

BigInt component_degree_complex(const BlockSpectrum& s, const RankVector& v) {
  if (v.field != Field::complex)
    throw std::invalid_argument("degree is only defined for complex components (real case: conjectured (deg)^2)");
  const auto slots = component_slots(s, v.field);
  BigInt deg = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) deg *= determinantal_degree(slots[i].bound, slots[i].bound, v.entries[i].rank);
  return deg;
}

ComponentDescriptor describe_component(const BlockSpectrum& s, const RankVector& v) {
  ComponentDescriptor d;
  d.rank_vector = v;
  d.dimension = component_dimension(s, v);
  if (v.field == Field::complex) d.degree = component_degree_complex(s, v);
  const auto slots = component_slots(s, v.field);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    std::string kind = v.field == Field::complex ? "complex" : (slots[i].weight == 2 ? "realization" : "real");
    d.block_shapes.push_back({kind, slots[i].l, slots[i].m, slots[i].bound, v.entries[i].rank});
  }
  return d;
}

RankVector classify_component(const Matrix& m, const Permutation& p, double tol, double rank_tol) {
  const double dev = commutator_deviation(m, p);
  if (dev > tol * (1.0 + m.norm()))
    throw NotEquivariant("matrix is not equivariant (max deviation " + std::to_string(dev) + ")", dev);
  const RealBaseChange q = real_base_change(p);
  const Matrix mq = q.inverse * m * q.matrix;
  const auto& blocks = q.layout.real_blocks;
  std::vector<Vector> values;
  double smax = 0;
  for (const auto& b : blocks) {
    values.push_back(singular_values(Matrix(mq.block(b.offset, b.offset, b.dim(), b.dim()))));
    if (values.back().size()) smax = std::max(smax, values.back().maxCoeff());
  }
  const double thr = rank_tol * smax * static_cast<double>(m.rows());
  std::vector<int> ranks;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    int rk = 0;
    for (Eigen::Index t = 0; t < values[i].size(); ++t) rk += values[i][t] > thr;
    if (blocks[i].kind == RealKind::complex_pair) {
      if (rk % 2)
        throw StructuralError("odd real rank " + std::to_string(rk) + " on realization block (" +
                                  std::to_string(blocks[i].l) + "," + std::to_string(blocks[i].m) + ")",
                              static_cast<int>(i), static_cast<int>(i), 0.0);
      rk /= 2;
    }
    ranks.push_back(rk);
  }
  return make_rank_vector(q.layout, Field::real, ranks);
}

namespace {

void add_realized_groups(std::vector<std::vector<TiedWeight>>& groups, int row0, int col0, int rows, int cols) {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      groups.push_back({{row0 + 2 * i, col0 + 2 * j, 1}, {row0 + 2 * i + 1, col0 + 2 * j + 1, 1}});
      groups.push_back({{row0 + 2 * i + 1, col0 + 2 * j, 1}, {row0 + 2 * i, col0 + 2 * j + 1, -1}});
    }
}

}  // namespace

WeightSharingReport weight_sharing(const BlockSpectrum& s, const RankVector& v) {
  if (v.field != Field::real) throw std::invalid_argument("weight sharing is reported for real components");
  WeightSharingReport rep;
  int bo = 0;
  for (std::size_t i = 0; i < s.real_blocks.size(); ++i) {
    const auto& b = s.real_blocks[i];
    const int r = v.entries[i].rank;
    if (r == 0)
      for (int t = 0; t < b.dim(); ++t) rep.inactive_inputs.push_back(b.offset + t);
    if (b.kind != RealKind::complex_pair) {
      for (int a = 0; a < b.size; ++a)
        for (int c = 0; c < r; ++c) {
          rep.decoder_groups.push_back({{b.offset + a, bo + c, 1}});
          rep.encoder_groups.push_back({{bo + c, b.offset + a, 1}});
        }
      bo += r;
    } else {
      add_realized_groups(rep.decoder_groups, b.offset, bo, b.size, r);
      add_realized_groups(rep.encoder_groups, bo, b.offset, r, b.size);
      bo += 2 * r;
    }
  }
  rep.bottleneck = bo;
  return rep;
}

BlockFactors random_block_factors(const BlockSpectrum& s, const RankVector& v, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  BlockFactors f;
  for (std::size_t i = 0; i < s.real_blocks.size(); ++i) {
    const auto& b = s.real_blocks[i];
    const int r = v.entries[i].rank;
    if (b.kind != RealKind::complex_pair) {
      Matrix a(b.size, r), e(r, b.size);
      for (int x = 0; x < a.size(); ++x) a.data()[x] = nd(rng);
      for (int x = 0; x < e.size(); ++x) e.data()[x] = nd(rng);
      f.real_a.push_back(a);
      f.real_b.push_back(e);
    } else {
      ComplexMatrix a(b.size, r), e(r, b.size);
      for (int x = 0; x < a.size(); ++x) a.data()[x] = {nd(rng), nd(rng)};
      for (int x = 0; x < e.size(); ++x) e.data()[x] = {nd(rng), nd(rng)};
      f.pair_a.push_back(a);
      f.pair_b.push_back(e);
    }
  }
  return f;
}

ComponentFactors assemble_component(const RealBaseChange& q, const RankVector& v, const BlockFactors& f) {
  const BlockSpectrum& s = q.layout;
  if (v.field != Field::real || v.entries.size() != s.real_blocks.size())
    throw std::invalid_argument("assemble_component: rank vector does not match the real layout");
  ComponentFactors out;
  out.pattern = weight_sharing(s, v);
  const int n = s.n, r = out.pattern.bottleneck;
  out.decoder_q = Matrix::Zero(n, r);
  out.encoder_q = Matrix::Zero(r, n);
  std::size_t ri = 0, pi = 0;
  int bo = 0;
  for (std::size_t i = 0; i < s.real_blocks.size(); ++i) {
    const auto& b = s.real_blocks[i];
    const int rk = v.entries[i].rank;
    if (b.kind != RealKind::complex_pair) {
      const Matrix& a = f.real_a.at(ri);
      const Matrix& e = f.real_b.at(ri);
      ++ri;
      if (a.rows() != b.size || a.cols() != rk || e.rows() != rk || e.cols() != b.size)
        throw std::invalid_argument("assemble_component: real factor shape mismatch");
      out.decoder_q.block(b.offset, bo, b.size, rk) = a;
      out.encoder_q.block(bo, b.offset, rk, b.size) = e;
      bo += rk;
    } else {
      const ComplexMatrix& a = f.pair_a.at(pi);
      const ComplexMatrix& e = f.pair_b.at(pi);
      ++pi;
      if (a.rows() != b.size || a.cols() != rk || e.rows() != rk || e.cols() != b.size)
        throw std::invalid_argument("assemble_component: complex factor shape mismatch");
      out.decoder_q.block(b.offset, bo, 2 * b.size, 2 * rk) = realize(a);
      out.encoder_q.block(bo, b.offset, 2 * rk, 2 * b.size) = realize(e);
      bo += 2 * rk;
    }
  }
  out.decoder = q.matrix * out.decoder_q;
  out.encoder = out.encoder_q * q.inverse;
  return out;
}

ComponentFactors parameterize_component(const RankVector& v, const Permutation& p, std::mt19937_64& rng) {
  if (v.field != Field::real) throw std::invalid_argument("parameterize_component needs a real rank vector");
  const RealBaseChange q = real_base_change(p);
  // validate against the layout of p
  make_rank_vector(q.layout, Field::real, v.values());
  return assemble_component(q, v, random_block_factors(q.layout, v, rng));
}

ComponentFactors factorize_component(const Matrix& m, const Permutation& p, double tol) {
  const RankVector v = classify_component(m, p, tol);
  const RealBaseChange q = real_base_change(p);
  const Matrix mq = q.inverse * m * q.matrix;
  BlockFactors f;
  for (std::size_t i = 0; i < q.layout.real_blocks.size(); ++i) {
    const auto& b = q.layout.real_blocks[i];
    const int s = v.entries[i].rank;
    const Matrix blk = mq.block(b.offset, b.offset, b.dim(), b.dim());
    if (b.kind != RealKind::complex_pair) {
      const SvdResult d = svd(blk);
      const Vector root = d.singular_values.head(s).cwiseSqrt();
      f.real_a.push_back(d.u.leftCols(s) * root.asDiagonal());
      f.real_b.push_back(root.asDiagonal() * d.vt.topRows(s));
    } else {
      const ComplexSvdResult d = svd(unrealize(blk, 1e-8));
      const Eigen::VectorXcd root = d.singular_values.head(s).cwiseSqrt().cast<cdouble>();
      f.pair_a.push_back(d.u.leftCols(s) * root.asDiagonal());
      f.pair_b.push_back(root.asDiagonal() * d.vh.topRows(s));
    }
  }
  return assemble_component(q, v, f);
}

std::vector<int> frequency_order(const BlockSpectrum& s) {
  std::vector<int> idx(s.real_blocks.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto phase = [&](int i) {
    const auto& b = s.real_blocks[i];
    if (b.kind == RealKind::real_plus) return std::pair<long, long>{0, 1};
    if (b.kind == RealKind::real_minus) return std::pair<long, long>{1, 2};
    return std::pair<long, long>{b.l - b.m, b.l};
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    auto [na, da] = phase(a);
    auto [nb, db] = phase(b);
    return na * db < nb * da;
  });
  return idx;
}

}  // namespace permeq
