#include "bwp/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bwp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Graph load_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
  if (lower(object) != "matrix" || lower(format) != "coordinate")
    throw ParseError("only 'matrix coordinate' files are supported", line_no);
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "pattern" && field != "real" && field != "integer")
    throw ParseError("unsupported field '" + field + "'", line_no);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz)) throw ParseError("malformed size line", line_no);
    break;
  }
  if (rows < 0) throw ParseError("missing size line", line_no);
  if (rows != cols) throw ParseError("matrix is not square", line_no);
  if (rows > 1000000) throw ParseError("matrix too large", line_no);
  const int n = static_cast<int>(rows);

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(std::max<long>(nnz, 0)));
  long read = 0;
  while (read < nnz) {
    if (!std::getline(in, line))
      throw ParseError("unexpected end of file: expected " + std::to_string(nnz) +
                           " entries, got " + std::to_string(read),
                       line_no);
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream entry(line);
    long i = 0, j = 0;
    if (!(entry >> i >> j)) throw ParseError("malformed entry", line_no);
    double value = 1.0;
    if (field != "pattern" && !(entry >> value))
      throw ParseError("missing numeric value", line_no);
    if (i < 1 || i > n || j < 1 || j > n)
      throw ParseError("index out of range", line_no);
    ++read;
    if (i == j) continue;           // structural diagonal is irrelevant
    if (value == 0.0) continue;     // explicit zero carries no edge
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  return Graph(n, std::move(edges), name);
}

Graph load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open file: " + path);
  return load_matrix_market(in, std::filesystem::path(path).stem().string());
}

void save_matrix_market(const Graph& g, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
  if (!g.name().empty()) out << "% " << g.name() << "\n";
  out << g.order() << " " << g.order() << " " << g.edge_count() << "\n";
  for (auto [u, v] : g.edges()) out << v << " " << u << "\n";
}

void save_matrix_market(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot open file for writing: " + path);
  save_matrix_market(g, out);
}

}  // namespace bwp
