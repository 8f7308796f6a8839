#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bwp/pipeline.hpp"
#include "oracles.hpp"

using namespace bwp;

TEST_CASE("edgeless graph yields zero bounds and an upper report") {
  Graph empty(9, {}, "empty");
  PartitionSpec spec{3, 1, {3, 3, 3}};
  BoundOptions opt;
  SpecOutcome out = compute_bounds(empty, spec, opt);
  CHECK(out.error.empty());
  CHECK(out.heuristic_value == 0);
  CHECK(out.lb_certified <= 1e-4);
  CHECK_FALSE(out.lower.has_value());
  CHECK_FALSE(out.lower_approx.has_value());
  REQUIRE(out.upper.has_value());
  CHECK(out.upper->value == upper_window_threshold(spec) - 1);
  CHECK(out.upper->safe);
}

TEST_CASE("certified pipeline on a small torus") {
  Graph t3 = make_torus(3);
  PartitionSpec spec{3, 1, {3, 3, 3}};
  BoundOptions opt;
  SpecOutcome out = compute_bounds(t3, spec, opt);
  CHECK(out.error.empty());
  CHECK(out.solver_status == SolveStatus::Converged);
  // certificate stays below the exact optimum
  const long long exact = min_far_edges_exact(t3, spec);
  CHECK(out.lb_certified <= double(exact) + 1e-9);
  CHECK(out.heuristic_value >= exact);
  REQUIRE(out.lower.has_value());
  CHECK(out.lower->value == 4);  // threshold 3 + 1
  CHECK(out.lower->safe);
}

TEST_CASE("bad spec is reported, not thrown") {
  Graph t3 = make_torus(3);
  PartitionSpec wrong{3, 1, {3, 3, 4}};  // sums to 10, graph has 9
  SpecOutcome out = compute_bounds(t3, wrong, {});
  CHECK_FALSE(out.error.empty());
}

TEST_CASE("worker pool returns results in spec order") {
  Graph t3 = make_torus(3);
  std::vector<PartitionSpec> specs = {
      {3, 1, {3, 3, 3}}, {3, 1, {4, 2, 3}}, {3, 1, {2, 5, 2}}, {3, 1, {1, 4, 4}}};
  BoundOptions opt;
  auto serial = compute_bounds_many(t3, specs, opt, 1);
  auto parallel = compute_bounds_many(t3, specs, opt, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].spec.m == specs[i].m);
    CHECK(parallel[i].heuristic_value == serial[i].heuristic_value);
    CHECK(parallel[i].lb_certified == serial[i].lb_certified);  // bitwise
  }
}

TEST_CASE("json and csv outputs are byte-stable") {
  Graph t3 = make_torus(3);
  PartitionSpec spec{3, 1, {3, 3, 3}};
  BoundOptions opt;
  SpecOutcome a = compute_bounds(t3, spec, opt);
  SpecOutcome b = compute_bounds(t3, spec, opt);
  CHECK(outcome_to_json(a) == outcome_to_json(b));
  CHECK(outcome_to_csv("T3", a) == outcome_to_csv("T3", b));
  CHECK(outcome_to_json(a).find("seconds") == std::string::npos);

  const std::string csv = outcome_to_csv("T3", a);
  CHECK(csv.substr(0, 3) == "T3,");
  const std::string header = outcome_csv_header();
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(csv.begin(), csv.end(), ','));
}

TEST_CASE("table rows are well-formed") {
  for (const std::string id : {"T7", "T8910", "TH", "hamming"}) {
    auto rows = table_rows(id);
    CHECK_FALSE(rows.empty());
    for (const auto& row : rows) {
      CHECK_NOTHROW(row.spec.validate());
      Graph g = instance_from_string(row.instance);
      CHECK(row.spec.n() == g.order());
    }
  }
  CHECK(table_rows("T7").size() == 6);
  CHECK(table_rows("hamming").size() == 8);
  CHECK_THROWS_AS(table_rows("nope"), InvalidParameter);
}

TEST_CASE("fast profile reduces budgets") {
  BoundOptions opt;
  const int before = opt.solver.max_iterations;
  apply_fast_profile(opt, 49);
  CHECK(opt.solver.tol_primal == 1e-4);
  CHECK(opt.solver.max_iterations < before);
  CHECK(opt.anneal.steps_per_temp == 5 * 49);
}

TEST_CASE("instance strings") {
  CHECK(instance_from_string("torus:5").order() == 25);
  CHECK(instance_from_string("torus-ham:4").order() == 16);
  CHECK(instance_from_string("hypercube:4").order() == 16);
  CHECK(instance_from_string("hamming:2:3").order() == 9);
}
