#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "bwp/error.hpp"

namespace bwp {

/// Bijection {1..n} -> {1..n}; label[v-1] is the new label of vertex v.
struct Labeling {
  std::vector<int> label;

  int size() const { return static_cast<int>(label.size()); }
  int of(int v) const { return label[v - 1]; }
  bool is_permutation() const;

  static Labeling identity(int n);
};

/// Simple undirected graph on vertices 1..n, stored as a sorted,
/// duplicate-free edge list plus adjacency lists. Immutable after
/// construction; safe to share across threads.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> edge_list, std::string name = "");

  int order() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const;
  bool adjacent(int u, int v) const;
  bool connected() const;
  const std::string& name() const { return name_; }

  /// Dense 0/1 adjacency matrix (symmetric, zero diagonal).
  Eigen::MatrixXd adjacency_matrix() const;
  /// Combinatorial Laplacian D - A.
  Eigen::MatrixXd laplacian_matrix() const;

  /// Graph with vertex v renamed to phi(v); edges follow the renaming.
  Graph relabeled(const Labeling& phi, std::string name = "") const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;  // (u, v) with u < v, 1-based
  std::vector<std::vector<int>> adj_;       // adj_[v] sorted; index 0 unused
  std::string name_;
};

/// k x k grid with wraparound in both directions: k^2 vertices, 2k^2 edges,
/// 4-regular. Requires k >= 3.
Graph make_torus(int k);

/// Torus relabeled to have identity-labeling bandwidth <= 2k, with the
/// Hamiltonian path 1-2-...-n merged in. Fewer than 3n edges.
Graph make_torus_ham(int k);

/// Cartesian product of d copies of K_q: vertices are d-tuples over {1..q},
/// edges join tuples differing in exactly one coordinate.
Graph make_hamming(int d, int q);

/// Closed-form bandwidth of the d-dimensional hypercube (Harper):
/// sum_{i=0}^{d-1} C(i, floor(i/2)).
long long hypercube_bandwidth(int d);

/// max over edges of |phi(u) - phi(v)|; 0 for edgeless graphs.
int bandwidth_of_labeling(const Graph& g, const Labeling& phi);

struct SpectralSummary {
  double lambda2 = 0.0;     // second-smallest Laplacian eigenvalue
  double lambda_max = 0.0;  // largest Laplacian eigenvalue
  int n = 0;
};

SpectralSummary laplacian_spectrum(const Graph& g);

/// n * lambda2 / lambda_max. Returns 0 for disconnected or edgeless graphs.
/// The value is a real-valued bandwidth bound; see spectral_integer_bound
/// for the integer reading.
double spectral_lower_bound(const Graph& g);

/// Integer lower bound implied by a strict real threshold "bdw > v":
/// floor(v - eps) + 1, guarding against floating-point ties.
int strict_integer_lower(double v, double eps = 1e-9);

/// Safe integer reading of the spectral value. The raw inequality is tight
/// for complete graphs (value n, bandwidth n-1), so the claim is weakened
/// by one: bdw >= floor(v - eps). Never exceeds the true bandwidth.
int spectral_integer_bound(double value);

/// JSON dump {"edges":[[i,j],...],"n":n,"name":...} with the sorted edge
/// list; byte-stable for equal graphs.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

}  // namespace bwp
