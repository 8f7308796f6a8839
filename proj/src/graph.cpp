#include "bwp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>

#include <nlohmann/json.hpp>

namespace bwp {

bool Labeling::is_permutation() const {
  const int n = size();
  std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
  for (int v : label) {
    if (v < 1 || v > n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Labeling Labeling::identity(int n) {
  Labeling phi;
  phi.label.resize(n);
  for (int i = 0; i < n; ++i) phi.label[i] = i + 1;
  return phi;
}

Graph::Graph(int n, std::vector<std::pair<int, int>> edge_list, std::string name)
    : n_(n), name_(std::move(name)) {
  if (n < 0) throw InvalidParameter("graph order must be nonnegative");
  for (auto& [u, v] : edge_list) {
    if (u < 1 || u > n || v < 1 || v > n)
      throw InvalidParameter("edge endpoint out of range 1..n");
    if (u == v) throw InvalidParameter("self-loops are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
  edges_ = std::move(edge_list);

  adj_.assign(static_cast<size_t>(n) + 1, {});
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

int Graph::max_degree() const {
  int d = 0;
  for (int v = 1; v <= n_; ++v) d = std::max(d, degree(v));
  return d;
}

bool Graph::adjacent(int u, int v) const {
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(static_cast<size_t>(n_) + 1, 0);
  std::queue<int> q;
  q.push(1);
  seen[1] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj_[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == n_;
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_, n_);
  for (auto [u, v] : edges_) {
    A(u - 1, v - 1) = 1.0;
    A(v - 1, u - 1) = 1.0;
  }
  return A;
}

Eigen::MatrixXd Graph::laplacian_matrix() const {
  Eigen::MatrixXd L = -adjacency_matrix();
  for (int v = 1; v <= n_; ++v) L(v - 1, v - 1) = degree(v);
  return L;
}

Graph Graph::relabeled(const Labeling& phi, std::string name) const {
  if (phi.size() != n_ || !phi.is_permutation())
    throw InvalidParameter("labeling is not a permutation of 1..n");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edges_.size());
  for (auto [u, v] : edges_) edges.emplace_back(phi.of(u), phi.of(v));
  return Graph(n_, std::move(edges), name.empty() ? name_ : std::move(name));
}

Graph make_torus(int k) {
  if (k < 3) throw InvalidParameter("torus requires k >= 3");
  const int n = k * k;
  auto id = [k](int i, int j) { return (i - 1) * k + j; };
  std::vector<std::pair<int, int>> edges;
  edges.reserve(2 * static_cast<size_t>(n));
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      edges.emplace_back(id(i, j), id(i % k + 1, j));  // vertical, with wrap
      edges.emplace_back(id(i, j), id(i, j % k + 1));  // horizontal, with wrap
    }
  return Graph(n, std::move(edges), "T" + std::to_string(k));
}

namespace {

// Positions of cycle vertices 1..k in the order 1, 2, k, 3, k-1, ...;
// cycle-adjacent vertices end up at most 2 apart.
std::vector<int> cycle_zigzag_positions(int k) {
  std::vector<int> order;
  order.reserve(k);
  order.push_back(1);
  int lo = 2, hi = k;
  bool front = true;
  while (static_cast<int>(order.size()) < k) {
    order.push_back(front ? lo++ : hi--);
    front = !front;
  }
  std::vector<int> pos(static_cast<size_t>(k) + 1, 0);
  for (int p = 0; p < k; ++p) pos[order[p]] = p + 1;
  return pos;
}

}  // namespace

Graph make_torus_ham(int k) {
  Graph torus = make_torus(k);
  const int n = k * k;

  // Product of two bandwidth-2 cycle orders: row steps move at most 2k
  // labels, column steps at most 2.
  const std::vector<int> z = cycle_zigzag_positions(k);
  Labeling phi;
  phi.label.resize(n);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j)
      phi.label[(i - 1) * k + (j - 1)] = (z[i] - 1) * k + z[j];

  Graph relabeled = torus.relabeled(phi);
  if (bandwidth_of_labeling(relabeled, Labeling::identity(n)) > 2 * k)
    throw ConstructionFailure("torus relabeling exceeded bandwidth 2k");

  std::vector<std::pair<int, int>> edges = relabeled.edges();
  for (int v = 1; v < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, std::move(edges), "TH" + std::to_string(k));
}

Graph make_hamming(int d, int q) {
  if (d < 1) throw InvalidParameter("hamming requires d >= 1");
  if (q < 2) throw InvalidParameter("hamming requires q >= 2");
  long long n = 1;
  for (int i = 0; i < d; ++i) {
    n *= q;
    if (n > 65536) throw InvalidParameter("hamming graph too large: q^d > 65536");
  }
  const int nn = static_cast<int>(n);

  // Vertex 1 + sum t_i q^i for digits t in {0..q-1}^d.
  std::vector<std::pair<int, int>> edges;
  std::vector<int> digits(d, 0);
  std::vector<long long> pow(d, 1);
  for (int i = 1; i < d; ++i) pow[i] = pow[i - 1] * q;
  for (int v = 0; v < nn; ++v) {
    long long rest = v;
    for (int i = 0; i < d; ++i) {
      digits[i] = static_cast<int>(rest % q);
      rest /= q;
    }
    for (int i = 0; i < d; ++i)
      for (int t = digits[i] + 1; t < q; ++t) {
        long long w = v + (t - digits[i]) * pow[i];
        edges.emplace_back(v + 1, static_cast<int>(w) + 1);
      }
  }
  std::string name = (q == 2) ? "Q" + std::to_string(d)
                              : "H(" + std::to_string(d) + "," + std::to_string(q) + ")";
  return Graph(nn, std::move(edges), std::move(name));
}

long long hypercube_bandwidth(int d) {
  if (d < 1 || d > 60) throw InvalidParameter("hypercube_bandwidth requires 1 <= d <= 60");
  auto binom = [](int a, int b) {
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  long long sum = 0;
  for (int i = 0; i < d; ++i) sum += binom(i, i / 2);
  return sum;
}

int bandwidth_of_labeling(const Graph& g, const Labeling& phi) {
  if (phi.size() != g.order() || !phi.is_permutation())
    throw InvalidParameter("labeling is not a permutation of 1..n");
  int bw = 0;
  for (auto [u, v] : g.edges()) bw = std::max(bw, std::abs(phi.of(u) - phi.of(v)));
  return bw;
}

SpectralSummary laplacian_spectrum(const Graph& g) {
  SpectralSummary s;
  s.n = g.order();
  if (g.order() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.laplacian_matrix(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Laplacian eigendecomposition did not converge");
  const auto& ev = es.eigenvalues();
  s.lambda2 = (g.order() >= 2) ? std::max(0.0, ev(1)) : 0.0;
  s.lambda_max = std::max(0.0, ev(g.order() - 1));
  return s;
}

double spectral_lower_bound(const Graph& g) {
  if (g.edge_count() == 0 || !g.connected()) return 0.0;
  SpectralSummary s = laplacian_spectrum(g);
  if (s.lambda_max <= 0.0) return 0.0;
  return g.order() * s.lambda2 / s.lambda_max;
}

int strict_integer_lower(double v, double eps) {
  return static_cast<int>(std::floor(v - eps)) + 1;
}

int spectral_integer_bound(double value) {
  return std::max(0, strict_integer_lower(value) - 1);
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["name"] = g.name();
  j["n"] = g.order();
  auto edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return Graph(j.at("n").get<int>(), std::move(edges),
               j.value("name", std::string{}));
}

}  // namespace bwp
