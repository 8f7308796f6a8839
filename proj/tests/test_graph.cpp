#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bwp/graph.hpp"
#include "bwp/matrix_market.hpp"
#include "oracles.hpp"

using namespace bwp;

TEST_CASE("graph construction validates and normalizes") {
  Graph g(4, {{2, 1}, {1, 2}, {3, 4}}, "g");
  CHECK(g.order() == 4);
  CHECK(g.edge_count() == 2);  // duplicate merged
  CHECK(g.edges()[0] == std::pair{1, 2});
  CHECK(g.adjacent(2, 1));
  CHECK_FALSE(g.adjacent(1, 3));
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), InvalidParameter);
  CHECK_THROWS_AS(Graph(3, {{0, 2}}), InvalidParameter);
  CHECK_THROWS_AS(Graph(3, {{1, 4}}), InvalidParameter);
}

TEST_CASE("adjacency and laplacian shapes") {
  Graph g(3, {{1, 2}, {2, 3}});
  Eigen::MatrixXd A = g.adjacency_matrix();
  CHECK(A.isApprox(A.transpose()));
  CHECK(A.diagonal().norm() == 0.0);
  Eigen::MatrixXd L = g.laplacian_matrix();
  CHECK(L(0, 0) == 1.0);
  CHECK(L(1, 1) == 2.0);
  CHECK((L.rowwise().sum().norm()) == doctest::Approx(0.0));
}

TEST_CASE("torus generator") {
  Graph t7 = make_torus(7);
  CHECK(t7.order() == 49);
  CHECK(t7.edge_count() == 98);

  Graph t3 = make_torus(3);
  CHECK(t3.order() == 9);
  for (int v = 1; v <= 9; ++v) CHECK(t3.degree(v) == 4);

  Graph t5 = make_torus(5);
  CHECK(t5.edge_count() == 50);
  CHECK(oracle::connected(t5));
  for (int v = 1; v <= t5.order(); ++v) CHECK(t5.degree(v) == 4);

  CHECK_THROWS_AS(make_torus(2), InvalidParameter);
}

TEST_CASE("torus plus hamiltonian path") {
  for (int k : {3, 4, 6, 7}) {
    Graph th = make_torus_ham(k);
    const int n = k * k;
    CHECK(th.order() == n);
    CHECK(th.edge_count() < 3 * n);
    CHECK(bandwidth_of_labeling(th, Labeling::identity(n)) <= 2 * k);
    // the path 1-2-...-n is present
    for (int v = 1; v < n; ++v) CHECK(th.adjacent(v, v + 1));
  }
}

TEST_CASE("hamming generator") {
  Graph q5 = make_hamming(5, 2);
  CHECK(q5.order() == 32);
  CHECK(q5.edge_count() == 80);
  for (int v = 1; v <= 32; ++v) CHECK(q5.degree(v) == 5);

  Graph k2 = make_hamming(1, 2);
  CHECK(k2.order() == 2);
  CHECK(k2.edge_count() == 1);

  Graph h23 = make_hamming(2, 3);
  CHECK(h23.order() == 9);
  for (int v = 1; v <= 9; ++v) CHECK(h23.degree(v) == 4);

  CHECK_THROWS_AS(make_hamming(30, 3), InvalidParameter);
  CHECK_THROWS_AS(make_hamming(0, 2), InvalidParameter);
}

TEST_CASE("hypercube bandwidth closed form") {
  CHECK(hypercube_bandwidth(1) == 1);
  CHECK(hypercube_bandwidth(3) == 4);
  CHECK(hypercube_bandwidth(5) == 13);
  CHECK(hypercube_bandwidth(6) == 23);
  CHECK(hypercube_bandwidth(7) == 43);

  // matches exhaustive search on the cube itself for small d
  for (int d : {1, 2, 3}) {
    Graph qd = make_hamming(d, 2);
    CHECK(hypercube_bandwidth(d) == oracle::exhaustive_bandwidth(qd));
  }
}

TEST_CASE("bandwidth of labeling") {
  Graph path(3, {{1, 2}, {2, 3}});
  CHECK(bandwidth_of_labeling(path, Labeling::identity(3)) == 1);

  Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  Labeling phi;
  phi.label = {3, 1, 4, 2};
  CHECK(bandwidth_of_labeling(k4, phi) == 3);
  CHECK(bandwidth_of_labeling(k4, Labeling::identity(4)) == 3);

  Graph empty(5, {});
  CHECK(bandwidth_of_labeling(empty, Labeling::identity(5)) == 0);

  Labeling bad;
  bad.label = {1, 1, 2, 3};
  CHECK_THROWS_AS(bandwidth_of_labeling(k4, bad), InvalidParameter);
}

TEST_CASE("relabeling permutes edges") {
  Graph path(3, {{1, 2}, {2, 3}});
  Labeling phi;
  phi.label = {2, 3, 1};  // 1->2, 2->3, 3->1
  Graph r = path.relabeled(phi);
  CHECK(r.adjacent(2, 3));
  CHECK(r.adjacent(3, 1));
  CHECK_FALSE(r.adjacent(1, 2));
}

TEST_CASE("spectral quantities and the bound") {
  // K_n: lambda_2 = lambda_max = n, value is exactly n.
  for (int n : {3, 5, 8}) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) edges.emplace_back(u, v);
    Graph kn(n, edges);
    SpectralSummary s = laplacian_spectrum(kn);
    CHECK(s.lambda2 == doctest::Approx(n).epsilon(1e-9));
    CHECK(s.lambda_max == doctest::Approx(n).epsilon(1e-9));
    CHECK(spectral_lower_bound(kn) == doctest::Approx(n));
    // integer reading must not exceed the true bandwidth n-1
    CHECK(spectral_integer_bound(spectral_lower_bound(kn)) <= n - 1);
  }

  Graph empty(4, {});
  CHECK(spectral_lower_bound(empty) == 0.0);

  Graph disconnected(4, {{1, 2}, {3, 4}});
  CHECK(spectral_lower_bound(disconnected) == 0.0);

  // Q5 Laplacian eigenvalues are 2*(bit count): lambda2 = 2, lambda_max = 10,
  // so the value is 32*2/10 = 6.4, comfortably below the true bandwidth 13.
  Graph q5 = make_hamming(5, 2);
  const double v = spectral_lower_bound(q5);
  CHECK(v == doctest::Approx(6.4).epsilon(1e-9));
  CHECK(v < 13.0);

  SpectralSummary s5 = laplacian_spectrum(q5);
  CHECK(s5.lambda2 >= 0.0);
  CHECK(s5.lambda2 <= s5.lambda_max);
  CHECK(s5.lambda_max <= 2.0 * q5.max_degree());
}

TEST_CASE("spectral integer bound never exceeds exhaustive bandwidth") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Graph g = oracle::random_graph(5 + int(seed % 4), 0.5, seed);
    const int claim = spectral_integer_bound(spectral_lower_bound(g));
    CHECK(claim <= oracle::exhaustive_bandwidth(g));
  }
}

TEST_CASE("strictness helper") {
  CHECK(strict_integer_lower(8.0) == 8);  // exact tie resolves downward
  CHECK(strict_integer_lower(8.2) == 9);
  CHECK(strict_integer_lower(7.9999999999) == 8);
}

TEST_CASE("matrix market load") {
  std::istringstream good(
      "%%MatrixMarket matrix coordinate pattern symmetric\n"
      "% a comment\n"
      "4 4 4\n"
      "2 1\n"
      "3 3\n"
      "4 2\n"
      "1 4\n");
  Graph g = load_matrix_market(good, "t");
  CHECK(g.order() == 4);
  CHECK(g.edge_count() == 3);  // diagonal entry dropped
  CHECK(g.adjacent(1, 2));
  CHECK(g.adjacent(2, 4));
  CHECK(g.adjacent(1, 4));

  std::istringstream diag_only(
      "%%MatrixMarket matrix coordinate real general\n"
      "3 3 2\n"
      "1 1 5.0\n"
      "2 2 1.0\n");
  CHECK(load_matrix_market(diag_only, "d").edge_count() == 0);

  std::istringstream zero_value(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "3 3 2\n"
      "2 1 0.0\n"
      "3 1 2.5\n");
  Graph z = load_matrix_market(zero_value, "z");
  CHECK(z.edge_count() == 1);
  CHECK(z.adjacent(1, 3));

  std::istringstream skew(
      "%%MatrixMarket matrix coordinate real skew-symmetric\n"
      "3 3 1\n"
      "2 1 -1.0\n");
  CHECK(load_matrix_market(skew, "s").adjacent(1, 2));
}

TEST_CASE("matrix market rejects malformed input with line numbers") {
  std::istringstream bad_banner("%MatrixMarket matrix coordinate real general\n1 1 0\n");
  CHECK_THROWS_AS(load_matrix_market(bad_banner, "x"), ParseError);

  std::istringstream complex_field(
      "%%MatrixMarket matrix coordinate complex symmetric\n1 1 0\n");
  CHECK_THROWS_AS(load_matrix_market(complex_field, "x"), ParseError);

  std::istringstream out_of_range(
      "%%MatrixMarket matrix coordinate pattern general\n3 3 1\n4 1\n");
  try {
    load_matrix_market(out_of_range, "x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }

  std::istringstream not_square(
      "%%MatrixMarket matrix coordinate pattern general\n3 4 0\n");
  CHECK_THROWS_AS(load_matrix_market(not_square, "x"), ParseError);

  std::istringstream truncated(
      "%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n");
  CHECK_THROWS_AS(load_matrix_market(truncated, "x"), ParseError);
}

TEST_CASE("matrix market round trip is edge-stable") {
  for (std::uint64_t seed : {1, 2, 3}) {
    Graph g = oracle::random_graph(12, 0.3, seed);
    std::stringstream buf;
    save_matrix_market(g, buf);
    Graph back = load_matrix_market(buf, "back");
    CHECK(back.order() == g.order());
    CHECK(back.edges() == g.edges());

    // writing again yields identical bytes
    std::stringstream buf2, buf3;
    save_matrix_market(g, buf2);
    Graph h(g.order(), g.edges(), g.name());
    save_matrix_market(h, buf3);
    CHECK(buf2.str() == buf3.str());
  }
}

TEST_CASE("json dump round trip") {
  Graph g = make_torus(3);
  const std::string j = graph_to_json(g);
  Graph back = graph_from_json(j);
  CHECK(back.order() == g.order());
  CHECK(back.edges() == g.edges());
  CHECK(back.name() == g.name());
  CHECK(graph_to_json(back) == j);
}

TEST_CASE("literature instances when files are provided") {
  const char* dir = std::getenv("BWP_DATA_DIR");
  if (!dir) return;  // optional: needs the user-supplied collection files
  auto check_counts = [&](const std::string& name, int n, int edges) {
    const auto path = std::filesystem::path(dir) / (name + ".mtx");
    if (!std::filesystem::exists(path)) return;
    Graph g = load_matrix_market(path.string());
    CHECK(g.order() == n);
    CHECK(g.edge_count() == edges);
  };
  check_counts("mesh1e1", 48, 129);
  check_counts("CAN61", 61, 248);
}
