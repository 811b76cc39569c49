#include "permeq/perm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/pending/disjoint_sets.hpp>

namespace permeq {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  const int n = static_cast<int>(image_.size());
  std::vector<char> seen(n + 1, 0);
  for (int v : image_) {
    if (v < 1 || v > n) throw std::invalid_argument("permutation image out of range: " + std::to_string(v));
    if (seen[v]) throw std::invalid_argument("permutation image repeats " + std::to_string(v));
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 0) throw std::invalid_argument("negative n");
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t j = 0; j < image_.size(); ++j) inv[image_[j] - 1] = static_cast<int>(j) + 1;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& b) const {
  if (b.n() != n()) throw std::invalid_argument("compose: size mismatch");
  std::vector<int> img(image_.size());
  for (std::size_t j = 0; j < img.size(); ++j) img[j] = image_[b.image_[j] - 1];
  return Permutation(std::move(img));
}

Permutation Permutation::power(long long t) const {
  Permutation base = t < 0 ? inverse() : *this;
  unsigned long long e = t < 0 ? static_cast<unsigned long long>(-(t + 1)) + 1 : static_cast<unsigned long long>(t);
  Permutation acc = identity(n());
  while (e) {
    if (e & 1) acc = acc.compose(base);
    base = base.compose(base);
    e >>= 1;
  }
  return acc;
}

bool Permutation::is_identity() const {
  for (std::size_t j = 0; j < image_.size(); ++j)
    if (image_[j] != static_cast<int>(j) + 1) return false;
  return true;
}

std::uint64_t Permutation::order() const {
  std::uint64_t acc = 1;
  for (int len : cycle_decomposition(*this).lengths()) {
    std::uint64_t g = std::gcd(acc, static_cast<std::uint64_t>(len));
    std::uint64_t f = len / g;
    if (acc > std::numeric_limits<std::uint64_t>::max() / f) return std::numeric_limits<std::uint64_t>::max();
    acc *= f;
  }
  return acc;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  for (const auto& cyc : cycle_decomposition(*this).cycles) {
    if (cyc.size() < 2) continue;
    os << '(';
    for (std::size_t i = 0; i < cyc.size(); ++i) os << (i ? " " : "") << cyc[i];
    os << ')';
  }
  return os.str();
}

std::vector<int> CycleDecomposition::lengths() const {
  std::vector<int> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(static_cast<int>(c.size()));
  return out;
}

Partition Partition::from_blocks(int n, std::vector<std::vector<int>> blocks) {
  std::vector<char> seen(n + 1, 0);
  int covered = 0;
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition has an empty block");
    std::sort(b.begin(), b.end());
    for (int v : b) {
      if (v < 1 || v > n) throw std::invalid_argument("partition label out of range: " + std::to_string(v));
      if (seen[v]) throw std::invalid_argument("partition blocks overlap at " + std::to_string(v));
      seen[v] = 1;
      ++covered;
    }
  }
  if (covered != n) throw std::invalid_argument("partition does not cover [n]");
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Partition p;
  p.n = n;
  p.blocks = std::move(blocks);
  return p;
}

Partition Partition::singletons(int n) {
  std::vector<std::vector<int>> b(n);
  for (int i = 0; i < n; ++i) b[i] = {i + 1};
  return from_blocks(n, std::move(b));
}

std::vector<int> Partition::block_of() const {
  std::vector<int> out(n, -1);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int v : blocks[i]) out[v - 1] = static_cast<int>(i);
  return out;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    os << (i ? "," : "") << '{';
    for (std::size_t j = 0; j < blocks[i].size(); ++j) os << (j ? "," : "") << blocks[i][j];
    os << '}';
  }
  os << '}';
  return os.str();
}

namespace {

bool is_sep(char c) { return std::isspace(static_cast<unsigned char>(c)) || c == ','; }

int parse_label(std::string_view tok, int n) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("malformed label '" + std::string(tok) + "'", std::string(tok));
  if (v < 1 || v > n)
    throw ParseError("label " + std::string(tok) + " out of range 1.." + std::to_string(n), std::string(tok));
  return v;
}

Permutation parse_cycles(std::string_view s, int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  std::vector<char> used(n + 1, 0);
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_sep(s[i])) {
      ++i;
      continue;
    }
    if (s[i] != '(') throw ParseError("expected '(' at '" + std::string(1, s[i]) + "'", std::string(1, s[i]));
    ++i;
    std::vector<int> cyc;
    bool closed = false;
    while (i < s.size()) {
      char c = s[i];
      if (is_sep(c)) {
        ++i;
        continue;
      }
      if (c == ')') {
        closed = true;
        ++i;
        break;
      }
      if (c == '(') throw ParseError("nested '('", "(");
      std::size_t j = i;
      while (j < s.size() && !is_sep(s[j]) && s[j] != '(' && s[j] != ')') ++j;
      std::string_view tok = s.substr(i, j - i);
      int v = parse_label(tok, n);
      if (used[v]) throw ParseError("duplicate label " + std::string(tok), std::string(tok));
      used[v] = 1;
      cyc.push_back(v);
      i = j;
    }
    if (!closed) throw ParseError("unterminated cycle", "(");
    if (cyc.empty()) throw ParseError("empty cycle", "()");
    for (std::size_t t = 0; t < cyc.size(); ++t) img[cyc[t] - 1] = cyc[(t + 1) % cyc.size()];
  }
  return Permutation(std::move(img));
}

Permutation parse_image(std::string_view s, int n) {
  std::vector<int> img;
  std::vector<char> used(n + 1, 0);
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_sep(s[i])) {
      ++i;
      continue;
    }
    if (s[i] == ')') throw ParseError("unmatched ')'", ")");
    std::size_t j = i;
    while (j < s.size() && !is_sep(s[j])) ++j;
    std::string_view tok = s.substr(i, j - i);
    int v = parse_label(tok, n);
    if (used[v]) throw ParseError("duplicate label " + std::string(tok), std::string(tok));
    used[v] = 1;
    img.push_back(v);
    i = j;
  }
  if (static_cast<int>(img.size()) != n)
    throw ParseError("one-line image has " + std::to_string(img.size()) + " entries, expected " + std::to_string(n),
                     std::string(s));
  return Permutation(std::move(img));
}

}  // namespace

Permutation parse_permutation(std::string_view text, int n) {
  if (n < 1) throw ParseError("n must be positive", std::to_string(n));
  bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) return Permutation::identity(n);
  if (text.find('(') != std::string_view::npos) return parse_cycles(text, n);
  return parse_image(text, n);
}

CycleDecomposition cycle_decomposition(const Permutation& p) {
  CycleDecomposition c;
  c.n = p.n();
  std::vector<char> seen(p.n() + 1, 0);
  for (int start = 1; start <= p.n(); ++start) {
    if (seen[start]) continue;
    std::vector<int> cyc;
    for (int j = start; !seen[j]; j = p(j)) {
      seen[j] = 1;
      cyc.push_back(j);
    }
    c.cycles.push_back(std::move(cyc));
  }
  return c;
}

Partition induced_partition(const CycleDecomposition& c) { return Partition::from_blocks(c.n, c.cycles); }

IntMatrix permutation_matrix(const Permutation& p) {
  IntMatrix m = IntMatrix::Zero(p.n(), p.n());
  for (int j = 1; j <= p.n(); ++j) m(j - 1, p(j) - 1) = 1;
  return m;
}

Eigen::MatrixXd apply_permutation(const Permutation& p, const Eigen::MatrixXd& x) {
  if (x.rows() != p.n()) throw std::invalid_argument("apply_permutation: row mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (int j = 1; j <= p.n(); ++j) out.row(j - 1) = x.row(p(j) - 1);
  return out;
}

Partition finest_common_coarsening(const std::vector<Partition>& parts) {
  if (parts.empty()) throw std::invalid_argument("finest_common_coarsening: empty list");
  const int n = parts.front().n;
  std::vector<int> rank(n), parent(n);
  boost::disjoint_sets<int*, int*> ds(rank.data(), parent.data());
  for (int i = 0; i < n; ++i) ds.make_set(i);
  for (const auto& p : parts) {
    if (p.n != n) throw std::invalid_argument("finest_common_coarsening: mismatched n");
    for (const auto& b : p.blocks)
      for (std::size_t t = 1; t < b.size(); ++t) ds.union_set(b[0] - 1, b[t] - 1);
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int root = ds.find_set(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i + 1);
  }
  return Partition::from_blocks(n, std::move(groups));
}

bool refines(const Partition& finer, const Partition& coarser) {
  if (finer.n != coarser.n) return false;
  auto owner = coarser.block_of();
  for (const auto& b : finer.blocks)
    for (int v : b)
      if (owner[v - 1] != owner[b[0] - 1]) return false;
  return true;
}

IntMatrix replication_matrix(const Partition& part) {
  IntMatrix e = IntMatrix::Zero(static_cast<int>(part.k()), part.n);
  for (std::size_t i = 0; i < part.blocks.size(); ++i)
    for (int v : part.blocks[i]) e(static_cast<int>(i), v - 1) = 1;
  return e;
}

Permutation cycle_type_permutation(int count, int length) {
  if (count < 0 || length < 1) throw std::invalid_argument("cycle type needs count >= 0 and length >= 1");
  std::vector<int> img(static_cast<std::size_t>(count) * length);
  for (int c = 0; c < count; ++c)
    for (int t = 0; t < length; ++t) img[c * length + t] = c * length + (t + 1) % length + 1;
  return Permutation(std::move(img));
}

Permutation grid_rotation(int p) {
  std::vector<int> img(p * p);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) img[r * p + c] = c * p + (p - 1 - r) + 1;
  return Permutation(std::move(img));
}

Permutation grid_horizontal_shift(int h, int w) {
  std::vector<int> img(h * w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) img[r * w + c] = r * w + (c + 1) % w + 1;
  return Permutation(std::move(img));
}

}  // namespace permeq
