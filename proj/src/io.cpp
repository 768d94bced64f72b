#include "pmorkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmorkit/errors.hpp"

namespace pmk {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open for writing: " + path);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::io_error, "write failed: " + path);
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open for reading: " + path);
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    fail(ErrorCode::io_error, "bad matrix header in " + path);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j)))
        fail(ErrorCode::io_error, "truncated matrix data in " + path);
  return m;
}

void write_key_values(const std::string& path, const KeyValues& kv) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open for writing: " + path);
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open for reading: " + path);
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  return v;
}

std::string format_double_list(const std::vector<double>& v) {
  std::ostringstream out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << format_double(v[i]);
  }
  return out.str();
}

}  // namespace pmk
