#pragma once

#include <iosfwd>
#include <string>

#include "bwp/graph.hpp"

namespace bwp {

/// Reads a coordinate Matrix Market file as a simple graph: diagonal entries
/// are dropped, nonzeros are binarized, and the pattern is symmetrized by
/// taking the union of (i,j) and (j,i). Accepts pattern/real/integer fields
/// and general/symmetric/skew-symmetric symmetry; the matrix must be square.
Graph load_matrix_market(std::istream& in, const std::string& name = "");
Graph load_matrix_market(const std::string& path);

/// Writes the graph in coordinate pattern symmetric format (lower triangle,
/// 1-based). Output is byte-stable and round-trips through the loader.
void save_matrix_market(const Graph& g, std::ostream& out);
void save_matrix_market(const Graph& g, const std::string& path);

}  // namespace bwp
