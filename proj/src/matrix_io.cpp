#include "permeq/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace permeq {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::vector<std::string>> split_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!rows.empty() && cells.size() != rows.front().size())
      throw std::runtime_error("csv: ragged row " + std::to_string(rows.size() + 1));
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

double parse_double(const std::string& s) {
  std::string t = trim(s);
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw std::runtime_error("not a number: '" + s + "'");
  return v;
}

std::string format_complex(cdouble z) {
  std::string im = format_double(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

cdouble parse_complex(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) throw std::runtime_error("empty complex entry");
  if (t.back() != 'i') return {parse_double(t), 0.0};
  t.pop_back();
  // split at the last sign that is not part of an exponent and not leading
  std::size_t cut = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  if (cut == std::string::npos) {
    if (t.empty() || t == "+") return {0.0, 1.0};
    if (t == "-") return {0.0, -1.0};
    return {0.0, parse_double(t)};
  }
  std::string re = t.substr(0, cut), im = t.substr(cut);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return {parse_double(re), parse_double(im)};
}

Matrix read_csv(std::istream& in) {
  auto rows = split_csv(in);
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse_double(rows[i][j]);
  return m;
}

Matrix read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_csv(f);
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const Matrix& m) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_csv(f, m);
}

ComplexMatrix read_complex_csv(std::istream& in) {
  auto rows = split_csv(in);
  if (rows.empty()) return ComplexMatrix(0, 0);
  ComplexMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse_complex(rows[i][j]);
  return m;
}

void write_complex_csv(std::ostream& out, const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_complex(m(i, j));
    out << '\n';
  }
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto r = j.at("rows").get<Eigen::Index>(), c = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != r * c) throw std::runtime_error("matrix json: data length mismatch");
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = data[i * c + k].get<double>();
  return m;
}

nlohmann::json complex_matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix complex_matrix_from_json(const nlohmann::json& j) {
  const auto r = j.at("rows").get<Eigen::Index>(), c = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != r * c) throw std::runtime_error("matrix json: data length mismatch");
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = {data[i * c + k][0].get<double>(), data[i * c + k][1].get<double>()};
  return m;
}

}  // namespace permeq
