#include "bwp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bwp {

int PartitionSpec::n() const {
  return std::accumulate(m.begin(), m.end(), 0);
}

void PartitionSpec::validate() const {
  if (k < 3) throw InvalidParameter("partition spec requires k >= 3");
  if (static_cast<int>(m.size()) != k)
    throw InvalidParameter("partition spec has " + std::to_string(m.size()) +
                           " sizes for k = " + std::to_string(k));
  for (int mi : m)
    if (mi < 1) throw InvalidParameter("all block sizes must be >= 1");
  if (r < 1 || r > k - 2)
    throw InvalidParameter("band radius must satisfy 1 <= r <= k-2");
}

std::string PartitionSpec::to_string() const {
  std::ostringstream out;
  out << "k=" << k << " r=" << r << " m=(";
  for (size_t i = 0; i < m.size(); ++i) out << (i ? "," : "") << m[i];
  out << ")";
  return out.str();
}

std::string spec_to_json(const PartitionSpec& spec) {
  nlohmann::json j;
  j["k"] = spec.k;
  j["r"] = spec.r;
  j["m"] = spec.m;
  return j.dump();
}

PartitionSpec spec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PartitionSpec spec;
  spec.k = j.at("k").get<int>();
  spec.r = j.at("r").get<int>();
  spec.m = j.at("m").get<std::vector<int>>();
  spec.validate();
  return spec;
}

Eigen::MatrixXd band_mask(int k, int r) {
  if (r < 1 || r > k - 2) throw InvalidParameter("band radius out of range 1..k-2");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (std::abs(i - j) > r) B(i, j) = 1.0;
  return B;
}

std::vector<int> PartitionMatrix::block_sizes() const {
  std::vector<int> sizes(k, 0);
  for (int b : block) ++sizes[b - 1];
  return sizes;
}

Eigen::MatrixXd PartitionMatrix::matrix() const {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n(), k);
  for (int v = 1; v <= n(); ++v) X(v - 1, block_of(v) - 1) = 1.0;
  return X;
}

void PartitionMatrix::validate(const PartitionSpec& spec) const {
  if (k != spec.k || n() != spec.n())
    throw InvalidParameter("partition dimensions do not match spec");
  for (int b : block)
    if (b < 1 || b > k) throw InvalidParameter("block index out of range");
  if (block_sizes() != spec.m)
    throw InvalidParameter("partition block sizes do not match spec");
}

PartitionMatrix basic_partition(const std::vector<int>& m) {
  PartitionMatrix part;
  part.k = static_cast<int>(m.size());
  for (int b = 1; b <= part.k; ++b) {
    if (m[b - 1] < 1) throw InvalidParameter("all block sizes must be >= 1");
    part.block.insert(part.block.end(), m[b - 1], b);
  }
  return part;
}

long long far_edge_count(const Graph& g, const PartitionMatrix& part, int r) {
  if (part.n() != g.order())
    throw InvalidParameter("partition order does not match graph");
  long long count = 0;
  for (auto [u, v] : g.edges())
    if (std::abs(part.block_of(u) - part.block_of(v)) > r) ++count;
  return count;
}

double far_edge_count_quadratic(const Graph& g, const PartitionMatrix& part, int r) {
  if (part.n() != g.order())
    throw InvalidParameter("partition order does not match graph");
  const Eigen::MatrixXd X = part.matrix();
  const Eigen::MatrixXd B = band_mask(part.k, r);
  return 0.5 * (g.adjacency_matrix() * (X * B * X.transpose())).trace();
}

int lower_window_threshold(const PartitionSpec& spec) {
  spec.validate();
  int best = std::numeric_limits<int>::max();
  for (int i = 1; i <= spec.k - spec.r - 1; ++i) {
    int sum = 0;
    for (int j = i + 1; j <= i + spec.r; ++j) sum += spec.m[j - 1];
    best = std::min(best, sum);
  }
  return best;
}

int upper_window_threshold(const PartitionSpec& spec) {
  spec.validate();
  int best = 0;
  for (int i = 0; i <= spec.k - spec.r - 1; ++i) {
    int sum = 0;
    for (int j = i + 1; j <= i + spec.r + 1; ++j) sum += spec.m[j - 1];
    best = std::max(best, sum);
  }
  return best;
}

PartitionSpec scheme_equal_blocks(int n, int k, int inner) {
  if (k < 3) throw InvalidParameter("scheme requires k >= 3");
  if (inner < 1) throw InvalidParameter("inner block size must be >= 1");
  const int rest = n - (k - 2) * inner;
  if (rest < 4) throw InvalidParameter("infeasible sizes: outer blocks need >= 2 vertices each");
  PartitionSpec spec;
  spec.k = k;
  spec.r = 1;
  spec.m.assign(k, inner);
  spec.m.front() = rest / 2;
  spec.m.back() = rest - rest / 2;
  spec.validate();
  return spec;
}

PartitionSpec scheme_literature(int n, int k, int inner) {
  if (inner == 0) inner = n / k;
  return scheme_equal_blocks(n, k, inner);
}

PartitionSpec scheme_alternating(int n, int k, int m2, int m3) {
  if (k < 4) throw InvalidParameter("alternating scheme requires k >= 4");
  if (m2 < 1 || m3 < 1) throw InvalidParameter("inner block sizes must be >= 1");
  PartitionSpec spec;
  spec.k = k;
  spec.r = 2;
  spec.m.assign(k, 0);
  int used = 0;
  for (int i = 2; i <= k - 1; ++i) {
    spec.m[i - 1] = (i % 2 == 0) ? m2 : m3;
    used += spec.m[i - 1];
  }
  const int rest = n - used;
  if (rest < 4) throw InvalidParameter("infeasible sizes: outer blocks need >= 2 vertices each");
  spec.m.front() = rest / 2;
  spec.m.back() = rest - rest / 2;
  spec.validate();
  return spec;
}

double partition_count(int n, const std::vector<int>& m) {
  double count = 1.0;
  int assigned = 0;
  // Product of C(remaining, m_i) left to right.
  for (int mi : m) {
    int remaining = n - assigned;
    double c = 1.0;
    for (int i = 1; i <= mi; ++i) c = c * (remaining - mi + i) / i;
    count *= c;
    assigned += mi;
    if (!std::isfinite(count)) return count;
  }
  return count;
}

namespace {

struct ExactSearch {
  const Graph& g;
  int k, r;
  std::vector<int> capacity;
  std::vector<int> assign;  // assign[v-1], 0 = unassigned
  long long best = std::numeric_limits<long long>::max();

  void run(int v, long long partial) {
    if (partial >= best) return;
    if (v > g.order()) {
      best = partial;
      return;
    }
    for (int b = 1; b <= k; ++b) {
      if (capacity[b - 1] == 0) continue;
      long long added = 0;
      for (int w : g.neighbors(v))
        if (w < v && std::abs(assign[w - 1] - b) > r) ++added;
      capacity[b - 1]--;
      assign[v - 1] = b;
      run(v + 1, partial + added);
      assign[v - 1] = 0;
      capacity[b - 1]++;
    }
  }
};

}  // namespace

long long min_far_edges_exact(const Graph& g, const PartitionSpec& spec, double budget) {
  spec.validate();
  if (spec.n() != g.order())
    throw InvalidParameter("spec block sizes do not sum to the graph order");
  const double count = partition_count(g.order(), spec.m);
  if (!(count <= budget)) {
    std::ostringstream msg;
    msg << "enumeration refused: " << count << " partitions exceed budget " << budget;
    throw BudgetExceeded(msg.str());
  }
  ExactSearch search{g, spec.k, spec.r, spec.m, std::vector<int>(g.order(), 0)};
  search.run(1, 0);
  return search.best;
}

std::string report_to_json(const BoundReport& report) {
  nlohmann::json j;
  j["kind"] = (report.kind == BoundReport::Kind::Lower) ? "lower" : "upper";
  j["value"] = report.value;
  j["safe"] = report.safe;
  j["certificate"] = report.certificate;
  return j.dump();
}

std::optional<BoundReport> infer_bandwidth_bound(const PartitionSpec& spec,
                                                 double min_far_lb, double safety,
                                                 bool certified) {
  if (!(min_far_lb > safety)) return std::nullopt;
  BoundReport report;
  report.kind = BoundReport::Kind::Lower;
  report.value = lower_window_threshold(spec) + 1;
  report.safe = certified;
  std::ostringstream cert;
  cert << "min far-edge count >= " << min_far_lb << " on " << spec.to_string()
       << (certified ? " (dual certificate)" : " (uncertified)");
  report.certificate = cert.str();
  return report;
}

std::optional<BoundReport> infer_bandwidth_upper(const Graph& g,
                                                 const PartitionSpec& spec,
                                                 const PartitionMatrix& witness) {
  witness.validate(spec);
  if (far_edge_count(g, witness, spec.r) != 0) return std::nullopt;
  BoundReport report;
  report.kind = BoundReport::Kind::Upper;
  report.value = upper_window_threshold(spec) - 1;
  report.safe = true;  // the exhibited partition is itself the proof
  report.certificate = "partition with zero far edges on " + spec.to_string();
  return report;
}

}  // namespace bwp
