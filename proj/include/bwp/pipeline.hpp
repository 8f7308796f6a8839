#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bwp/admm.hpp"
#include "bwp/heuristics.hpp"
#include "bwp/partition.hpp"
#include "bwp/sdp_model.hpp"

namespace bwp {

struct BoundOptions {
  ModelKind model = ModelKind::Slater;
  NonnegMode nonneg = NonnegMode::All;
  bool elim_nonneg = false;  // reduced model: add eliminated-block inequalities
  AdmmParams solver;
  AnnealParams anneal;
  int anneal_seeds = 3;
  double safety = 1e-4;  // margin a certified bound must clear before a claim
};

/// Applies the reduced-budget profile: solver tolerance 1e-4, a tenth of the
/// iterations, and a tenth of the annealing steps.
void apply_fast_profile(BoundOptions& opt, int n);

struct SpecOutcome {
  PartitionSpec spec;
  long long heuristic_value = -1;  // annealed upper bound on the minimum far-edge count
  PartitionMatrix heuristic_partition;
  double lb_certified = 0.0;
  double lb_raw = 0.0;
  SolveStatus solver_status = SolveStatus::MaxIterations;
  int solver_iterations = 0;
  double seconds = 0.0;
  std::optional<BoundReport> lower;         // certified bandwidth lower bound
  std::optional<BoundReport> lower_approx;  // raw-objective claim, never safe
  std::optional<BoundReport> upper;         // from a zero-far-edge witness
  std::string error;                        // nonempty when this spec failed
};

/// Heuristic upper bound, SDP solve with dual certification, and the window
/// threshold inference, for one spec.
SpecOutcome compute_bounds(const Graph& g, const PartitionSpec& spec,
                           const BoundOptions& opt);

/// Worker-pool version; results come back in spec order regardless of
/// scheduling.
std::vector<SpecOutcome> compute_bounds_many(const Graph& g,
                                             const std::vector<PartitionSpec>& specs,
                                             const BoundOptions& opt, int workers);

/// Timing fields are excluded unless with_timings is set, keeping the output
/// byte-stable for fixed config and seed.
std::string outcome_to_json(const SpecOutcome& out, bool with_timings = false);
std::string outcome_csv_header(bool with_timings = false);
std::string outcome_to_csv(const std::string& instance, const SpecOutcome& out,
                           bool with_timings = false);

struct TableRow {
  std::string instance;  // torus:7, torus-ham:8, hypercube:6
  PartitionSpec spec;
};

/// Benchmark rows for the bundled tables: "T7", "T8910", "TH", "hamming".
std::vector<TableRow> table_rows(const std::string& table_id);

/// Instance names used by the literature table; files are looked up as
/// <name>.mtx in a user-supplied directory.
const std::vector<std::string>& literature_names();

Graph instance_from_string(const std::string& text);

}  // namespace bwp
