#pragma once

#include <iosfwd>
#include <string>

#include "sonata/graph.hpp"
#include "sonata/types.hpp"

namespace sonata::io {

// Plain-text matrices: one row per line, space-separated, 17 significant digits.

std::string format_real(double x);

void write_matrix(std::ostream& os, const Mat& a);
void write_row(std::ostream& os, const Vec& v);

/// Reads `rows` lines of `cols` values each.
Mat read_matrix(std::istream& is, int rows, int cols);
/// Reads every remaining non-empty line; all rows must have equal width.
Mat read_matrix(std::istream& is);
Vec read_row(std::istream& is, int cols);

void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);

}  // namespace sonata::io
