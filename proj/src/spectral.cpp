#include "permeq/spectral.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace permeq {

std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field parse_field(const std::string& s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw std::invalid_argument("field must be 'real' or 'complex', got '" + s + "'");
}

std::string to_string(RealKind k) {
  switch (k) {
    case RealKind::real_plus: return "real_plus";
    case RealKind::real_minus: return "real_minus";
    case RealKind::complex_pair: return "complex_pair";
  }
  return "?";
}

namespace {

cdouble root_of_unity(int num, int den) {
  // exact values on the axes keep the block forms free of 1e-17 noise
  int r = ((num % den) + den) % den;
  if (r == 0) return {1, 0};
  if (2 * r == den) return {-1, 0};
  if (4 * r == den) return {0, 1};
  if (4 * r == 3 * den) return {0, -1};
  double t = 2 * std::numbers::pi * r / den;
  return {std::cos(t), std::sin(t)};
}

// Eigenvalue exp(2 pi i num / den) reduced to (l, m).
std::pair<int, int> reduce_label(int num, int den) {
  int r = ((num % den) + den) % den;
  if (r == 0) return {1, 1};
  int g = std::gcd(r, den);
  return {den / g, r / g};
}

}  // namespace

cdouble ComplexBlock::eigenvalue() const { return root_of_unity(l == 1 ? 0 : m, l); }

cdouble RealBlock::rotation() const {
  switch (kind) {
    case RealKind::real_plus: return {1, 0};
    case RealKind::real_minus: return {-1, 0};
    case RealKind::complex_pair: return root_of_unity(l - m, l);
  }
  return {0, 0};
}

std::int64_t BlockSpectrum::d(int l) const {
  auto it = multiplicities.find(l);
  return it == multiplicities.end() ? 0 : it->second;
}

int euler_phi(int l) {
  int result = l;
  int x = l;
  for (int p = 2; p * p <= x; ++p) {
    if (x % p) continue;
    while (x % p == 0) x /= p;
    result -= result / p;
  }
  if (x > 1) result -= result / x;
  return result;
}

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

BlockSpectrum spectrum_from_lengths(const std::vector<int>& lengths) {
  BlockSpectrum s;
  s.cycle_lengths = lengths;
  s.k = static_cast<int>(lengths.size());
  for (int len : lengths) {
    if (len < 1) throw std::invalid_argument("cycle length must be positive");
    s.n += len;
    for (int l : divisors(len)) s.multiplicities[l] += 1;
  }
  int off = 0;
  for (const auto& [l, d] : s.multiplicities) {
    for (int m = 1; m <= std::max(1, l - 1); ++m) {
      if (l > 1 && std::gcd(m, l) != 1) continue;
      s.complex_blocks.push_back({l, m, static_cast<int>(d), off});
      off += static_cast<int>(d);
    }
  }
  off = 0;
  if (s.d(1) > 0) {
    s.real_blocks.push_back({RealKind::real_plus, 1, 1, static_cast<int>(s.d(1)), off});
    off += s.real_blocks.back().dim();
  }
  if (s.d(2) > 0) {
    s.real_blocks.push_back({RealKind::real_minus, 2, 1, static_cast<int>(s.d(2)), off});
    off += s.real_blocks.back().dim();
  }
  for (const auto& [l, d] : s.multiplicities) {
    if (l < 3) continue;
    for (int m = l / 2 + 1; m < l; ++m) {
      if (std::gcd(m, l) != 1) continue;
      s.real_blocks.push_back({RealKind::complex_pair, l, m, static_cast<int>(d), off});
      off += s.real_blocks.back().dim();
    }
  }
  return s;
}

BlockSpectrum eigen_multiplicities(const CycleDecomposition& c) { return spectrum_from_lengths(c.lengths()); }

std::int64_t commutant_dimension(const BlockSpectrum& s) {
  std::int64_t total = 0;
  for (const auto& [l, d] : s.multiplicities) total += static_cast<std::int64_t>(euler_phi(l)) * d * d;
  return total;
}

std::int64_t commutant_dimension(const CycleDecomposition& c) { return commutant_dimension(eigen_multiplicities(c)); }

std::vector<int> cycle_sort_order(const Permutation& p) {
  const Permutation inv = p.inverse();
  std::vector<int> order;
  order.reserve(p.n());
  for (const auto& cyc : cycle_decomposition(p).cycles) {
    int a = cyc.front();
    for (std::size_t t = 0; t < cyc.size(); ++t) {
      order.push_back(a - 1);
      a = inv(a);
    }
  }
  return order;
}

IntMatrix cycle_sort_matrix(const Permutation& p) {
  auto order = cycle_sort_order(p);
  IntMatrix t1 = IntMatrix::Zero(p.n(), p.n());
  for (int j = 0; j < p.n(); ++j) t1(order[j], j) = 1;
  return t1;
}

ComplexBaseChange complex_base_change(const Permutation& p) {
  const int n = p.n();
  ComplexBaseChange bc;
  const auto lengths = cycle_decomposition(p).lengths();
  bc.layout = spectrum_from_lengths(lengths);
  bc.t1 = cycle_sort_matrix(p);
  bc.t2 = ComplexMatrix::Zero(n, n);
  ComplexMatrix t2inv = ComplexMatrix::Zero(n, n);
  std::vector<std::pair<int, int>> label(n);
  int off = 0;
  for (int len : lengths) {
    for (int j = 0; j < len; ++j)
      for (int k = 0; k < len; ++k) {
        cdouble z = root_of_unity(j * k, len);
        bc.t2(off + j, off + k) = z;
        t2inv(off + k, off + j) = std::conj(z) / static_cast<double>(len);
      }
    for (int k = 0; k < len; ++k) {
      bc.step2_diagonal.push_back(root_of_unity(-k, len));
      label[off + k] = reduce_label(-k, len);
    }
    off += len;
  }
  bc.t3 = IntMatrix::Zero(n, n);
  int col = 0;
  for (const auto& blk : bc.layout.complex_blocks)
    for (int j = 0; j < n; ++j)
      if (label[j] == std::make_pair(blk.l, blk.m)) bc.t3(j, col++) = 1;
  if (col != n) throw std::logic_error("complex_base_change: grouping incomplete");
  const ComplexMatrix t1c = bc.t1.cast<double>().cast<cdouble>();
  const ComplexMatrix t3c = bc.t3.cast<double>().cast<cdouble>();
  bc.matrix = t1c * bc.t2 * t3c;
  bc.inverse = t3c.transpose() * t2inv * t1c.transpose();
  return bc;
}

RealBaseChange real_base_change(const Permutation& p) {
  const int n = p.n();
  RealBaseChange bc;
  const auto lengths = cycle_decomposition(p).lengths();
  bc.layout = spectrum_from_lengths(lengths);
  bc.q1 = Matrix::Zero(n, n);

  // per cycle: w0, the alternating column when the length is even, then (Re, Im) pairs
  struct ColInfo {
    RealKind kind;
    int l, m;
    int cycle;
    int part;  // 0 = Re, 1 = Im for pairs
  };
  std::vector<ColInfo> info(n);
  int off = 0;
  for (std::size_t c = 0; c < lengths.size(); ++c) {
    const int len = lengths[c];
    const double s0 = 1.0 / std::sqrt(static_cast<double>(len));
    int col = off;
    for (int t = 0; t < len; ++t) bc.q1(off + t, col) = s0;
    info[col++] = {RealKind::real_plus, 1, 1, static_cast<int>(c), 0};
    if (len % 2 == 0) {
      for (int t = 0; t < len; ++t) bc.q1(off + t, col) = (t % 2 ? -s0 : s0);
      info[col++] = {RealKind::real_minus, 2, 1, static_cast<int>(c), 0};
    }
    const double s1 = std::sqrt(2.0 / len);
    for (int j = 1; 2 * j < len; ++j) {
      for (int t = 0; t < len; ++t) {
        cdouble z = root_of_unity(j * t, len);
        bc.q1(off + t, col) = s1 * z.real();
        bc.q1(off + t, col + 1) = s1 * z.imag();
      }
      auto [l, mp] = reduce_label(j, len);
      info[col] = {RealKind::complex_pair, l, l - mp, static_cast<int>(c), 0};
      info[col + 1] = {RealKind::complex_pair, l, l - mp, static_cast<int>(c), 1};
      col += 2;
    }
    off += len;
  }

  for (const auto& blk : bc.layout.real_blocks)
    for (int j = 0; j < n; ++j)
      if (info[j].kind == blk.kind && info[j].l == blk.l && info[j].m == blk.m) bc.grouping.push_back(j);
  if (static_cast<int>(bc.grouping.size()) != n) throw std::logic_error("real_base_change: grouping incomplete");

  const Matrix tq = bc.q1;
  const auto order = cycle_sort_order(p);
  bc.matrix = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) bc.matrix(order[r], i) = tq(r, bc.grouping[i]);
  bc.inverse = bc.matrix.transpose();
  return bc;
}

ComplexMatrix complex_block_form(const BlockSpectrum& s) {
  ComplexMatrix d = ComplexMatrix::Zero(s.n, s.n);
  for (const auto& b : s.complex_blocks)
    for (int i = 0; i < b.size; ++i) d(b.offset + i, b.offset + i) = b.eigenvalue();
  return d;
}

Matrix real_block_form(const BlockSpectrum& s) {
  Matrix d = Matrix::Zero(s.n, s.n);
  for (const auto& b : s.real_blocks) {
    if (b.kind != RealKind::complex_pair) {
      const double v = b.kind == RealKind::real_plus ? 1.0 : -1.0;
      for (int i = 0; i < b.size; ++i) d(b.offset + i, b.offset + i) = v;
      continue;
    }
    const ComplexMatrix rot = ComplexMatrix::Identity(b.size, b.size) * b.rotation();
    d.block(b.offset, b.offset, b.dim(), b.dim()) = realize(rot);
  }
  return d;
}

}  // namespace permeq
