#include "sonata/matrix_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sonata/error.hpp"

namespace sonata::io {

namespace {

bool next_data_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::vector<double> parse_values(const std::string& line) {
  std::istringstream ss(line);
  std::vector<double> out;
  std::string token;
  while (ss >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(Errc::Io, "not a number: '" + token + "'");
    }
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_row(std::ostream& os, const Vec& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (j) os << ' ';
    os << format_real(v(j));
  }
  os << '\n';
}

void write_matrix(std::ostream& os, const Mat& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << format_real(a(i, j));
    }
    os << '\n';
  }
}

Vec read_row(std::istream& is, int cols) {
  std::string line;
  if (cols == 0) return Vec(0);
  if (!next_data_line(is, line)) throw Error(Errc::Io, "unexpected end of matrix data");
  auto values = parse_values(line);
  if (static_cast<int>(values.size()) != cols)
    throw Error(Errc::Io, "expected " + std::to_string(cols) + " values, got " +
                              std::to_string(values.size()));
  return Eigen::Map<Vec>(values.data(), cols);
}

Mat read_matrix(std::istream& is, int rows, int cols) {
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i) a.row(i) = read_row(is, cols).transpose();
  return a;
}

Mat read_matrix(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (next_data_line(is, line)) {
    rows.push_back(parse_values(line));
    if (rows.back().size() != rows.front().size()) throw Error(Errc::Io, "ragged matrix rows");
  }
  if (rows.empty()) return Mat(0, 0);
  Mat a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return a;
}

void write_graph(std::ostream& os, const Graph& g) {
  const int m = g.size();
  Mat adj = Mat::Zero(m, m);
  for (auto [i, j] : g.edges()) {
    adj(i, j) = 1.0;
    adj(j, i) = 1.0;
  }
  write_matrix(os, adj);
}

Graph read_graph(std::istream& is) {
  const Mat adj = read_matrix(is);
  if (adj.rows() == 0 || adj.rows() != adj.cols()) throw Error(Errc::Io, "adjacency must be square");
  Graph g(static_cast<int>(adj.rows()));
  for (Eigen::Index i = 0; i < adj.rows(); ++i)
    for (Eigen::Index j = i + 1; j < adj.cols(); ++j) {
      if (adj(i, j) != adj(j, i)) throw Error(Errc::Io, "adjacency is not symmetric");
      if (adj(i, j) != 0.0) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    }
  for (Eigen::Index i = 0; i < adj.rows(); ++i)
    if (adj(i, i) != 0.0) throw Error(Errc::Io, "self-loop in adjacency");
  return g;
}

}  // namespace sonata::io
