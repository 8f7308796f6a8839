#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bwp/graph.hpp"

namespace bwp {

/// Block count k, block sizes m (summing to the graph order), and band
/// radius r with 1 <= r <= k-2.
struct PartitionSpec {
  int k = 0;
  int r = 0;
  std::vector<int> m;

  int n() const;
  void validate() const;  // throws InvalidParameter on a malformed spec
  std::string to_string() const;
};

std::string spec_to_json(const PartitionSpec& spec);
PartitionSpec spec_from_json(const std::string& text);

/// Band complement mask of order k: entry (i,j) is 1 iff |i-j| > r.
Eigen::MatrixXd band_mask(int k, int r);

/// Assignment of vertices 1..n to blocks 1..k.
struct PartitionMatrix {
  int k = 0;
  std::vector<int> block;  // block[v-1] in 1..k

  int n() const { return static_cast<int>(block.size()); }
  int block_of(int v) const { return block[v - 1]; }
  std::vector<int> block_sizes() const;

  /// The n x k 0/1 assignment matrix X with unit row sums.
  Eigen::MatrixXd matrix() const;

  /// Throws InvalidParameter unless the block sizes equal spec.m.
  void validate(const PartitionSpec& spec) const;
};

/// Consecutive ranges: the first m[0] vertices in block 1, the next m[1] in
/// block 2, and so on.
PartitionMatrix basic_partition(const std::vector<int>& m);

/// Number of edges whose endpoints lie in blocks more than r apart.
long long far_edge_count(const Graph& g, const PartitionMatrix& part, int r);

/// Same quantity computed as (1/2) <A, X B X^T> with dense matrix algebra;
/// an independent code path kept for cross-checking.
double far_edge_count_quadratic(const Graph& g, const PartitionMatrix& part, int r);

/// Smallest sum of r consecutive inner block sizes (windows m[i+1..i+r] for
/// i = 1..k-r-1, 1-based). A positive minimum far-edge count certifies
/// bandwidth strictly greater than this value.
int lower_window_threshold(const PartitionSpec& spec);

/// Largest sum of r+1 consecutive block sizes. A partition with zero far
/// edges certifies bandwidth strictly below this value.
int upper_window_threshold(const PartitionSpec& spec);

/// Equal inner blocks m_2 = ... = m_{k-1} = inner; the outer blocks split
/// the remainder with m_1 = floor, m_k = ceil.
PartitionSpec scheme_equal_blocks(int n, int k, int inner);

/// Same shape with the outer split written as m_1 = floor((n-d)/2),
/// m_k = ceil((n-d)/2) for d = (k-2)*inner; inner defaults to floor(n/k).
PartitionSpec scheme_literature(int n, int k, int inner = 0);

/// Alternating inner sizes (m1, m2, m3, m2, m3, ..., mk) for r = 2 usage;
/// outer blocks absorb the remainder.
PartitionSpec scheme_alternating(int n, int k, int m2, int m3);

/// Number of partitions with block sizes m (multinomial coefficient), as a
/// double so that oversized counts saturate gracefully.
double partition_count(int n, const std::vector<int>& m);

/// Exact minimum far-edge count over all partitions with block sizes m,
/// by deterministic lexicographic enumeration with capacity and incumbent
/// pruning. Throws BudgetExceeded when the partition count exceeds budget.
long long min_far_edges_exact(const Graph& g, const PartitionSpec& spec,
                              double budget = 1e7);

/// A one-sided bandwidth bound together with the evidence that produced it.
struct BoundReport {
  enum class Kind { Lower, Upper };
  Kind kind = Kind::Lower;
  int value = 0;  // Lower: bdw >= value.  Upper: bdw <= value.
  bool safe = false;
  std::string certificate;
};

std::string report_to_json(const BoundReport& report);

/// Turns a positive lower bound on the minimum far-edge count into a
/// bandwidth bound: if min_far_lb > safety, bandwidth >= threshold + 1.
/// Returns nothing otherwise. `certified` marks dual-certified evidence.
std::optional<BoundReport> infer_bandwidth_bound(const PartitionSpec& spec,
                                                 double min_far_lb,
                                                 double safety = 1e-4,
                                                 bool certified = true);

/// Turns an exhibited partition with zero far edges into an upper bound:
/// bandwidth <= upper_window_threshold - 1. The witness is revalidated;
/// returns nothing if its objective is not zero.
std::optional<BoundReport> infer_bandwidth_upper(const Graph& g,
                                                 const PartitionSpec& spec,
                                                 const PartitionMatrix& witness);

}  // namespace bwp
