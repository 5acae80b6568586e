#include "gmeopt/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "gmeopt/errors.hpp"

namespace gmeopt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  std::size_t b = token.find_first_not_of(" \t");
  std::size_t e = token.find_last_not_of(" \t\r");
  if (b == std::string::npos) throw InputError("empty numeric token");
  std::string t = token.substr(b, e - b + 1);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw InputError("bad numeric token: '" + t + "'");
  return v;
}

void write_matrix_csv(std::ostream& os, const Mat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Mat& m) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot open for writing: " + path);
  write_matrix_csv(f, m);
}

Mat read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(parse_double(tok));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError("ragged CSV matrix");
    rows.push_back(std::move(row));
  }
  Mat m(static_cast<Eigen::Index>(rows.size()),
        rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Mat read_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open for reading: " + path);
  return read_matrix_csv(f);
}

std::string format_vector(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

Vec parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(parse_double(tok));
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = vals[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace gmeopt
