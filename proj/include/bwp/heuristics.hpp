#pragma once

#include <cstdint>
#include <utility>

#include "bwp/graph.hpp"
#include "bwp/partition.hpp"

namespace bwp {

struct AnnealParams {
  double initial_temp = 0.0;   // <= 0: calibrate so ~80% of uphill moves pass
  double cooling_rate = 0.95;  // in (0,1)
  int steps_per_temp = 0;      // <= 0: 50 * n
  double min_temp = 1e-3;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Simulated annealing over partitions with fixed block sizes; moves swap
/// two vertices in different blocks. Returns the best partition found and
/// its exact far-edge count (recomputed from scratch). The value is a valid
/// upper bound on the minimum.
std::pair<PartitionMatrix, long long> anneal_partition(const Graph& g,
                                                       const PartitionSpec& spec,
                                                       const AnnealParams& params = {});

/// Reverse Cuthill-McKee: breadth-first level order from a pseudo-peripheral
/// start (double sweep), neighbors visited by increasing degree, order
/// reversed. Components are processed in order of their smallest vertex.
Labeling rcm_labeling(const Graph& g);

/// Simulated annealing over labelings; moves swap the labels of two
/// vertices. The energy is the bandwidth with ties broken by how many edges
/// attain it. Starts from the reverse Cuthill-McKee order. Returns the best
/// labeling and its exact bandwidth.
std::pair<Labeling, int> anneal_labeling(const Graph& g, const AnnealParams& params = {});

/// Proportion of edges within band b: |E| / (b*n - b(b+1)/2).
double bandwidth_density(const Graph& g, int b);

/// Best-of-seeds drivers; runs use seeds base.seed, base.seed+1, ... and the
/// winner is the lexicographically smallest (value, seed) pair.
std::pair<PartitionMatrix, long long> anneal_partition_best(const Graph& g,
                                                            const PartitionSpec& spec,
                                                            AnnealParams base, int seeds);
std::pair<Labeling, int> anneal_labeling_best(const Graph& g, AnnealParams base, int seeds);

}  // namespace bwp
