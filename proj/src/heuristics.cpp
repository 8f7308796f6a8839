#include "bwp/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <queue>
#include <random>

namespace bwp {

void AnnealParams::validate() const {
  if (cooling_rate <= 0.0 || cooling_rate >= 1.0)
    throw InvalidParameter("cooling rate must lie in (0,1)");
  if (min_temp <= 0.0) throw InvalidParameter("min temperature must be positive");
}

namespace {

// Temperature at which the mean sampled uphill step is accepted with
// probability ~0.8; falls back to 1 when no uphill move was seen.
double calibrate_temperature(const std::vector<double>& uphill) {
  if (uphill.empty()) return 1.0;
  double mean = 0.0;
  for (double d : uphill) mean += d;
  mean /= static_cast<double>(uphill.size());
  return std::max(mean / std::log(1.0 / 0.8), 1e-12);
}

}  // namespace

std::pair<PartitionMatrix, long long> anneal_partition(const Graph& g,
                                                       const PartitionSpec& spec,
                                                       const AnnealParams& params) {
  spec.validate();
  params.validate();
  if (spec.n() != g.order())
    throw InvalidParameter("spec block sizes do not sum to the graph order");
  const int n = g.order(), k = spec.k, r = spec.r;

  std::mt19937_64 rng(params.seed);
  PartitionMatrix part = basic_partition(spec.m);
  std::shuffle(part.block.begin(), part.block.end(), rng);

  auto delta_swap = [&](int u, int v) {
    const int bu = part.block_of(u), bv = part.block_of(v);
    long long delta = 0;
    for (int w : g.neighbors(u)) {
      if (w == v) continue;
      const int bw = part.block_of(w);
      delta += (std::abs(bv - bw) > r) - (std::abs(bu - bw) > r);
    }
    for (int w : g.neighbors(v)) {
      if (w == u) continue;
      const int bw = part.block_of(w);
      delta += (std::abs(bu - bw) > r) - (std::abs(bv - bw) > r);
    }
    return delta;
  };

  long long value = far_edge_count(g, part, r);
  long long best_value = value;
  std::vector<int> best_block = part.block;

  std::uniform_int_distribution<int> pick(1, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_cross_pair = [&](int& u, int& v) {
    do {
      u = pick(rng);
      v = pick(rng);
    } while (part.block_of(u) == part.block_of(v));
  };

  double temp = params.initial_temp;
  if (temp <= 0.0) {
    std::vector<double> uphill;
    for (int s = 0; s < 200 && n >= 2 && k >= 2; ++s) {
      int u, v;
      random_cross_pair(u, v);
      const long long d = delta_swap(u, v);
      if (d > 0) uphill.push_back(static_cast<double>(d));
    }
    temp = calibrate_temperature(uphill);
  }
  const int steps = params.steps_per_temp > 0 ? params.steps_per_temp : 50 * n;

  while (temp > params.min_temp) {
    for (int s = 0; s < steps; ++s) {
      int u, v;
      random_cross_pair(u, v);
      const long long d = delta_swap(u, v);
      if (d <= 0 || unit(rng) < std::exp(-double(d) / temp)) {
        std::swap(part.block[u - 1], part.block[v - 1]);
        value += d;
        if (value < best_value) {
          best_value = value;
          best_block = part.block;
        }
      }
    }
    temp *= params.cooling_rate;
  }

  part.block = std::move(best_block);
  const long long exact = far_edge_count(g, part, r);  // never trust the increments alone
  return {std::move(part), exact};
}

namespace {

// Farthest-from-start vertex of smallest degree, by breadth-first levels.
std::pair<int, int> bfs_eccentricity(const Graph& g, int start) {
  std::vector<int> dist(static_cast<size_t>(g.order()) + 1, -1);
  std::queue<int> q;
  q.push(start);
  dist[start] = 0;
  int far = start;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  int ecc = 0;
  for (int v = 1; v <= g.order(); ++v)
    if (dist[v] > ecc) ecc = dist[v];
  for (int v = 1; v <= g.order(); ++v)
    if (dist[v] == ecc && (dist[far] != ecc || g.degree(v) < g.degree(far))) far = v;
  return {far, ecc};
}

int pseudo_peripheral(const Graph& g, int seed_vertex) {
  int u = seed_vertex;
  int ecc = bfs_eccentricity(g, u).second;
  for (int sweep = 0; sweep < g.order(); ++sweep) {
    auto [v, ecc_v] = bfs_eccentricity(g, u);
    if (ecc_v <= ecc && sweep > 0) break;
    ecc = ecc_v;
    u = v;
    if (ecc_v == 0) break;
  }
  return u;
}

}  // namespace

Labeling rcm_labeling(const Graph& g) {
  const int n = g.order();
  std::vector<char> visited(static_cast<size_t>(n) + 1, 0);
  std::vector<int> order;
  order.reserve(n);

  for (int v0 = 1; v0 <= n; ++v0) {
    if (visited[v0]) continue;
    // Smallest-degree unvisited vertex of this component, then double sweep.
    int comp_min = v0;
    {
      std::queue<int> q;
      std::vector<int> comp;
      q.push(v0);
      visited[v0] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        comp.push_back(v);
        for (int w : g.neighbors(v))
          if (!visited[w]) {
            visited[w] = 1;
            q.push(w);
          }
      }
      for (int v : comp) {
        visited[v] = 0;  // re-marked by the ordering pass below
        if (g.degree(v) < g.degree(comp_min) ||
            (g.degree(v) == g.degree(comp_min) && v < comp_min))
          comp_min = v;
      }
    }
    const int start = pseudo_peripheral(g, comp_min);

    std::queue<int> q;
    q.push(start);
    visited[start] = 1;
    std::vector<int> nbr;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      nbr.clear();
      for (int w : g.neighbors(v))
        if (!visited[w]) nbr.push_back(w);
      std::sort(nbr.begin(), nbr.end(), [&g](int a, int b) {
        return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
      });
      for (int w : nbr) {
        visited[w] = 1;
        q.push(w);
      }
    }
  }
  std::reverse(order.begin(), order.end());

  Labeling phi;
  phi.label.resize(n);
  for (int pos = 0; pos < n; ++pos) phi.label[order[pos] - 1] = pos + 1;
  return phi;
}

namespace {

// Bandwidth state under label swaps: per-distance edge counts and the
// current maximum, with O(deg) updates.
struct BandwidthState {
  const Graph& g;
  std::vector<int> label;   // label[v-1]
  std::vector<int> count;   // count[d] = edges at label distance d
  int max_dist = 0;

  explicit BandwidthState(const Graph& graph, const Labeling& phi)
      : g(graph), label(phi.label), count(static_cast<size_t>(graph.order()) + 1, 0) {
    for (auto [u, v] : g.edges()) {
      const int d = std::abs(label[u - 1] - label[v - 1]);
      ++count[d];
      max_dist = std::max(max_dist, d);
    }
  }

  long long energy() const {
    return static_cast<long long>(max_dist) * (g.edge_count() + 1) +
           (max_dist > 0 ? count[max_dist] : 0);
  }

  void apply_swap(int u, int v) {
    for (int w : g.neighbors(u))
      if (w != v) --count[std::abs(label[u - 1] - label[w - 1])];
    for (int w : g.neighbors(v))
      if (w != u) --count[std::abs(label[v - 1] - label[w - 1])];
    std::swap(label[u - 1], label[v - 1]);
    for (int w : g.neighbors(u)) {
      if (w == v) continue;
      const int d = std::abs(label[u - 1] - label[w - 1]);
      ++count[d];
      max_dist = std::max(max_dist, d);
    }
    for (int w : g.neighbors(v)) {
      if (w == u) continue;
      const int d = std::abs(label[v - 1] - label[w - 1]);
      ++count[d];
      max_dist = std::max(max_dist, d);
    }
    while (max_dist > 0 && count[max_dist] == 0) --max_dist;
  }
};

}  // namespace

std::pair<Labeling, int> anneal_labeling(const Graph& g, const AnnealParams& params) {
  params.validate();
  const int n = g.order();
  if (n == 0) return {Labeling{}, 0};
  if (n == 1) return {Labeling::identity(1), 0};

  std::mt19937_64 rng(params.seed);
  BandwidthState state(g, rcm_labeling(g));
  long long energy = state.energy();
  long long best_energy = energy;
  std::vector<int> best_label = state.label;

  std::uniform_int_distribution<int> pick(1, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_pair = [&](int& u, int& v) {
    do {
      u = pick(rng);
      v = pick(rng);
    } while (u == v);
  };

  double temp = params.initial_temp;
  if (temp <= 0.0) {
    std::vector<double> uphill;
    for (int s = 0; s < 200; ++s) {
      int u, v;
      random_pair(u, v);
      state.apply_swap(u, v);
      const long long d = state.energy() - energy;
      state.apply_swap(u, v);
      if (d > 0) uphill.push_back(static_cast<double>(d));
    }
    temp = calibrate_temperature(uphill);
  }
  const int steps = params.steps_per_temp > 0 ? params.steps_per_temp : 50 * n;

  while (temp > params.min_temp) {
    for (int s = 0; s < steps; ++s) {
      int u, v;
      random_pair(u, v);
      state.apply_swap(u, v);
      const long long next = state.energy();
      const long long d = next - energy;
      if (d <= 0 || unit(rng) < std::exp(-double(d) / temp)) {
        energy = next;
        if (energy < best_energy) {
          best_energy = energy;
          best_label = state.label;
        }
      } else {
        state.apply_swap(u, v);
      }
    }
    temp *= params.cooling_rate;
  }

  Labeling phi;
  phi.label = std::move(best_label);
  return {phi, bandwidth_of_labeling(g, phi)};
}

double bandwidth_density(const Graph& g, int b) {
  if (b < 1) throw InvalidParameter("band must be >= 1");
  if (b >= g.order()) throw InvalidParameter("band must be smaller than the graph order");
  const double positions = double(b) * g.order() - double(b) * (b + 1) / 2.0;
  return g.edge_count() / positions;
}

std::pair<PartitionMatrix, long long> anneal_partition_best(const Graph& g,
                                                            const PartitionSpec& spec,
                                                            AnnealParams base, int seeds) {
  if (seeds < 1) throw InvalidParameter("need at least one seed");
  std::vector<std::future<std::pair<PartitionMatrix, long long>>> runs;
  for (int s = 0; s < seeds; ++s) {
    AnnealParams par = base;
    par.seed = base.seed + static_cast<std::uint64_t>(s);
    runs.push_back(std::async(std::launch::async,
                              [&g, &spec, par] { return anneal_partition(g, spec, par); }));
  }
  std::pair<PartitionMatrix, long long> best;
  for (int s = 0; s < seeds; ++s) {
    auto run = runs[s].get();
    if (s == 0 || run.second < best.second) best = std::move(run);
  }
  return best;
}

std::pair<Labeling, int> anneal_labeling_best(const Graph& g, AnnealParams base, int seeds) {
  if (seeds < 1) throw InvalidParameter("need at least one seed");
  std::vector<std::future<std::pair<Labeling, int>>> runs;
  for (int s = 0; s < seeds; ++s) {
    AnnealParams par = base;
    par.seed = base.seed + static_cast<std::uint64_t>(s);
    runs.push_back(std::async(std::launch::async,
                              [&g, par] { return anneal_labeling(g, par); }));
  }
  std::pair<Labeling, int> best;
  for (int s = 0; s < seeds; ++s) {
    auto run = runs[s].get();
    if (s == 0 || run.second < best.second) best = std::move(run);
  }
  return best;
}

}  // namespace bwp
