#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bwp/partition.hpp"
#include "oracles.hpp"

using namespace bwp;

TEST_CASE("spec validation") {
  PartitionSpec spec{4, 1, {16, 8, 8, 17}};
  CHECK(spec.n() == 49);
  CHECK_NOTHROW(spec.validate());

  CHECK_THROWS_AS((PartitionSpec{2, 1, {5, 5}}.validate()), InvalidParameter);
  CHECK_THROWS_AS((PartitionSpec{3, 2, {3, 3, 3}}.validate()), InvalidParameter);  // r > k-2
  CHECK_THROWS_AS((PartitionSpec{3, 1, {3, 0, 3}}.validate()), InvalidParameter);
  CHECK_THROWS_AS((PartitionSpec{3, 1, {3, 3}}.validate()), InvalidParameter);

  PartitionSpec back = spec_from_json(spec_to_json(spec));
  CHECK(back.k == spec.k);
  CHECK(back.r == spec.r);
  CHECK(back.m == spec.m);
}

TEST_CASE("band mask") {
  Eigen::MatrixXd b13 = band_mask(3, 1);
  CHECK(b13.sum() == 2.0);
  CHECK(b13(0, 2) == 1.0);
  CHECK(b13(2, 0) == 1.0);

  Eigen::MatrixXd b24 = band_mask(4, 2);
  CHECK(b24.sum() == 2.0);
  CHECK(b24(0, 3) == 1.0);

  // ones above the diagonal = (k-r-1)(k-r)/2
  Eigen::MatrixXd b16 = band_mask(6, 1);
  CHECK(b16.sum() == 2.0 * 10.0);
  CHECK(b16.isApprox(b16.transpose()));
  for (int i = 0; i < 6; ++i)
    for (int j = std::max(0, i - 1); j <= std::min(5, i + 1); ++j)
      CHECK(b16(i, j) == 0.0);

  CHECK_THROWS_AS(band_mask(4, 0), InvalidParameter);
  CHECK_THROWS_AS(band_mask(4, 3), InvalidParameter);
}

TEST_CASE("basic partition") {
  PartitionMatrix ident = basic_partition(std::vector<int>(5, 1));
  CHECK(ident.matrix().isApprox(Eigen::MatrixXd::Identity(5, 5)));

  // all-ones blocks exactly where block distance exceeds r
  const std::vector<int> m{3, 3, 3, 3, 3};
  PartitionMatrix part = basic_partition(m);
  Eigen::MatrixXd pattern = part.matrix() * band_mask(5, 2) * part.matrix().transpose();
  for (int u = 1; u <= 15; ++u)
    for (int v = 1; v <= 15; ++v) {
      const int bu = (u - 1) / 3 + 1, bv = (v - 1) / 3 + 1;
      CHECK(pattern(u - 1, v - 1) == (std::abs(bu - bv) > 2 ? 1.0 : 0.0));
    }

  CHECK_THROWS_AS((PartitionSpec{1, 1, {9}}.validate()), InvalidParameter);
}

TEST_CASE("far edge count on the six-cycle") {
  Graph c6(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}});
  PartitionMatrix part;
  part.k = 3;
  part.block = {1, 1, 2, 3, 3, 2};  // blocks {1,2}, {3,6}, {4,5}
  CHECK(far_edge_count(c6, part, 1) == 0);

  Graph empty(6, {});
  CHECK(far_edge_count(empty, part, 1) == 0);
}

TEST_CASE("two objective code paths agree") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 6 + int(rng() % 5);
    Graph g = oracle::random_graph(n, 0.45, rng());
    for (int k : {3, 4}) {
      if (k > n) continue;
      auto comps = oracle::compositions(n, k);
      const auto& m = comps[rng() % comps.size()];
      PartitionMatrix part = basic_partition(m);
      std::shuffle(part.block.begin(), part.block.end(), rng);
      for (int r = 1; r <= k - 2; ++r) {
        const long long direct = far_edge_count(g, part, r);
        const double quad = far_edge_count_quadratic(g, part, r);
        CHECK(quad == doctest::Approx(double(direct)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("permutation covariance of the objective") {
  std::mt19937_64 rng(11);
  Graph g = oracle::random_graph(9, 0.4, 3);
  const std::vector<int> m{3, 4, 2};
  PartitionMatrix basic = basic_partition(m);
  for (int trial = 0; trial < 10; ++trial) {
    Labeling perm = Labeling::identity(9);
    std::shuffle(perm.label.begin(), perm.label.end(), rng);
    // composing the block map with the permutation on the partition side...
    PartitionMatrix moved;
    moved.k = 3;
    moved.block.resize(9);
    for (int v = 1; v <= 9; ++v) moved.block[v - 1] = basic.block_of(perm.of(v));
    // ...equals applying the permutation to the graph instead
    const long long lhs = far_edge_count(g, moved, 1);
    const long long rhs = far_edge_count(g.relabeled(perm), basic, 1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("window thresholds") {
  CHECK(lower_window_threshold({4, 1, {16, 8, 8, 17}}) == 8);
  CHECK(lower_window_threshold({6, 2, {15, 9, 8, 9, 8, 15}}) == 17);
  CHECK(lower_window_threshold({9, 3, std::vector<int>(9, 1)}) == 3);
  CHECK(lower_window_threshold({5, 1, {11, 9, 9, 9, 11}}) == 9);

  CHECK(upper_window_threshold({5, 2, {3, 3, 3, 3, 3}}) == 9);
  CHECK(upper_window_threshold({6, 1, std::vector<int>(6, 1)}) == 2);
  CHECK(upper_window_threshold({3, 1, {2, 2, 2}}) == 4);

  // windows of length r sit inside windows of length r+1
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + int(rng() % 5);
    std::vector<int> m(k);
    int mmin = 100;
    for (int& mi : m) {
      mi = 1 + int(rng() % 9);
      mmin = std::min(mmin, mi);
    }
    for (int r = 1; r <= k - 2; ++r) {
      PartitionSpec spec{k, r, m};
      CHECK(lower_window_threshold(spec) <= upper_window_threshold(spec) - mmin);
    }
  }
}

TEST_CASE("size schemes") {
  CHECK(scheme_equal_blocks(49, 4, 8).m == std::vector<int>{16, 8, 8, 17});
  CHECK(scheme_equal_blocks(64, 6, 10).m == std::vector<int>{12, 10, 10, 10, 10, 12});
  CHECK(scheme_equal_blocks(49, 6, 9).m == std::vector<int>{6, 9, 9, 9, 9, 7});
  CHECK_THROWS_AS(scheme_equal_blocks(10, 3, 8), InvalidParameter);

  CHECK(scheme_literature(49, 4, 8).m == std::vector<int>{16, 8, 8, 17});
  CHECK(scheme_literature(62, 6).m == std::vector<int>{11, 10, 10, 10, 10, 11});

  CHECK(scheme_alternating(64, 6, 9, 8).m == std::vector<int>{15, 9, 8, 9, 8, 15});
  CHECK(scheme_alternating(64, 6, 9, 9).m == std::vector<int>{14, 9, 9, 9, 9, 14});
  CHECK(scheme_alternating(20, 4, 5, 6).m == std::vector<int>{4, 5, 6, 5});
  CHECK(scheme_alternating(20, 4, 5, 6).r == 2);
  CHECK_THROWS_AS(scheme_alternating(10, 6, 3, 3), InvalidParameter);
}

TEST_CASE("partition count") {
  CHECK(partition_count(5, {1, 1, 1, 1, 1}) == doctest::Approx(120));
  CHECK(partition_count(9, {3, 3, 3}) == doctest::Approx(1680));
  CHECK(partition_count(6, {2, 2, 2}) == doctest::Approx(90));
}

TEST_CASE("exact minimum far edges") {
  Graph empty(6, {});
  CHECK(min_far_edges_exact(empty, {3, 1, {2, 2, 2}}) == 0);

  // complete graph on 5 with unit blocks: pairs at label distance > 1
  std::vector<std::pair<int, int>> e5;
  for (int u = 1; u <= 5; ++u)
    for (int v = u + 1; v <= 5; ++v) e5.emplace_back(u, v);
  Graph k5(5, e5);
  CHECK(min_far_edges_exact(k5, {5, 1, {1, 1, 1, 1, 1}}) == 6);

  Graph c6(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}});
  CHECK(min_far_edges_exact(c6, {3, 1, {2, 2, 2}}) == 0);

  CHECK_THROWS_AS(min_far_edges_exact(c6, {3, 1, {2, 2, 2}}, 10.0), BudgetExceeded);
}

TEST_CASE("exact search matches the naive oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 6 + int(rng() % 2);
    Graph g = oracle::random_graph(n, 0.5, 1000 + trial);
    auto comps = oracle::compositions(n, 3);
    const auto& m = comps[rng() % comps.size()];
    PartitionSpec spec{3, 1, m};
    CHECK(min_far_edges_exact(g, spec) == oracle::exhaustive_min_far_edges(g, spec));
  }
}

TEST_CASE("window conclusions never contradict exhaustive bandwidth") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6 + int(rng() % 2);
    Graph g = oracle::random_graph(n, 0.5, 2000 + trial);
    const int bdw = oracle::exhaustive_bandwidth(g);
    for (int k : {3, 4}) {
      for (const auto& m : oracle::compositions(n, k)) {
        for (int r = 1; r <= k - 2; ++r) {
          PartitionSpec spec{k, r, m};
          const long long opt = min_far_edges_exact(g, spec);
          if (opt > 0) CHECK(bdw > lower_window_threshold(spec));
          if (opt == 0) CHECK(bdw < upper_window_threshold(spec));
        }
      }
    }
  }
}

TEST_CASE("bandwidth bound inference") {
  PartitionSpec t7{4, 1, {16, 8, 8, 17}};
  auto r1 = infer_bandwidth_bound(t7, 1.23);
  REQUIRE(r1.has_value());
  CHECK(r1->kind == BoundReport::Kind::Lower);
  CHECK(r1->value == 9);
  CHECK(r1->safe);

  CHECK_FALSE(infer_bandwidth_bound(t7, 0.0).has_value());
  CHECK_FALSE(infer_bandwidth_bound(t7, 5e-5).has_value());  // below safety

  PartitionSpec h5{4, 1, {7, 9, 9, 7}};
  auto r2 = infer_bandwidth_bound(h5, 0.99);
  REQUIRE(r2.has_value());
  CHECK(r2->value == 10);

  auto r3 = infer_bandwidth_bound(h5, 0.99, 1e-4, false);
  REQUIRE(r3.has_value());
  CHECK_FALSE(r3->safe);

  const std::string j = report_to_json(*r1);
  CHECK(j.find("\"kind\":\"lower\"") != std::string::npos);
  CHECK(j.find("\"value\":9") != std::string::npos);
}

TEST_CASE("upper bound from a zero witness") {
  Graph c6(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}});
  PartitionSpec spec{3, 1, {2, 2, 2}};
  PartitionMatrix witness;
  witness.k = 3;
  witness.block = {1, 1, 2, 3, 3, 2};
  auto rep = infer_bandwidth_upper(c6, spec, witness);
  REQUIRE(rep.has_value());
  CHECK(rep->kind == BoundReport::Kind::Upper);
  CHECK(rep->value == 3);  // bdw < 4, and indeed bdw(C6) = 2
  CHECK(rep->safe);

  PartitionMatrix nonzero;
  nonzero.k = 3;
  nonzero.block = {1, 2, 3, 1, 2, 3};
  CHECK_FALSE(infer_bandwidth_upper(c6, spec, nonzero).has_value());
}
