#include <doctest.h>

#include <cmath>

#include "cayperc/error.hpp"
#include "cayperc/rng.hpp"
#include "cayperc/spanning_forest.hpp"
#include "msf_properties.hpp"
#include "support.hpp"

using namespace cayperc;

namespace {

std::vector<double> coupling_labels(const Graph& g, std::uint64_t seed, std::uint64_t trial) {
  const LabelSource source(seed, trial);
  std::vector<double> labels(g.edge_count());
  for (std::size_t e = 0; e < labels.size(); ++e) labels[e] = source(e);
  return labels;
}

// Expected wired root degree of the 4-regular tree ball of radius r: with
// q_h(x) the probability that a height-h subtree below an edge of label x
// reaches the boundary through edges below x, an origin edge of label x is
// dropped exactly when its own branch and some other branch both reach the
// boundary below x.
double tree_wired_root_degree(int r) {
  const int steps = 200000;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = (i + 0.5) / steps;
    double q = 1.0;  // q_0
    for (int h = 1; h < r; ++h) q = 1.0 - std::pow(1.0 - x * q, 3);
    // q is q_{r-1}: the branch behind one origin edge, excluding that edge.
    const double other_three = 1.0 - std::pow(1.0 - x * q, 3);
    total += 1.0 - q * other_three;
  }
  return 4.0 * total / steps;
}

}  // namespace

TEST_SUITE("forest") {

TEST_CASE("triangle") {
  const auto g = testing::make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  const std::vector<double> labels{0.1, 0.5, 0.9};
  const auto forest = msf_free(g, labels);
  CHECK(forest.edges[0]);
  CHECK(forest.edges[1]);
  CHECK_FALSE(forest.edges[2]);
  CHECK(f_value(g, labels, 0).value == 0.9);
  CHECK(f_value(g, labels, 2).value == 0.5);
  CHECK(forest.to_hex() == "3");
}

TEST_CASE("bridges have infinite f") {
  const auto g = testing::make_graph(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  const std::vector<double> labels{0.1, 0.5, 0.9, 0.7};
  CHECK(f_value(g, labels, 3).infinite());
  CHECK(msf_free(g, labels).edges[3]);
}

TEST_CASE("trees keep every edge") {
  const auto ball = enumerate_ball(testing::f2(), 5);
  const auto labels = coupling_labels(ball.graph(), 1, 0);
  const auto forest = msf_free(ball.graph(), labels);
  CHECK(forest.edges.count() == ball.edge_count());
  const auto stats = forest_stats(forest, ball.graph());
  CHECK(stats.root_degree == 4);
  CHECK(stats.component_count == 1);
  CHECK(stats.internal_density ==
        doctest::Approx(static_cast<double>(ball.vertex_count() - 1) / ball.vertex_count()));
}

TEST_CASE("spanning trees of random graphs") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto g = testing::random_connected_graph(rng, 10, rng() % 25);
    std::vector<double> labels(g.edge_count());
    for (auto& x : labels) x = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto forest = msf_free(g, labels);
    CHECK(forest.edges.count() == 9);
    CHECK(testing::acyclic(g, forest));
  }
}

TEST_CASE("wired forest on a path") {
  // Z ball of radius r: 2r - 2 edges join interior vertices and two edges
  // reach the boundary, so the contracted graph is one cycle of 2r edges and
  // the largest label on it is dropped.
  const std::size_t r = 3;
  const auto ball = enumerate_ball(testing::z1(), r);
  const Graph& g = ball.graph();
  std::size_t short_count = 0;
  const std::size_t trials = 4000;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto labels = coupling_labels(g, 5, t);
    const auto wired = msf_wired(g, labels);
    const auto internal = wired.edges.count();
    CHECK((internal == 2 * r - 3 || internal == 2 * r - 2));
    CHECK(wired.edge_count() == 2 * r - 1);
    short_count += internal == 2 * r - 3;
  }
  // The dropped edge is internal with probability (2r - 2) / (2r).
  const double expected = static_cast<double>(2 * r - 2) / static_cast<double>(2 * r);
  const double freq = static_cast<double>(short_count) / trials;
  CHECK(std::abs(freq - expected) <= 4 * std::sqrt(expected * (1 - expected) / trials));
}

TEST_CASE("w on the contracted cycle of a path") {
  const auto ball = enumerate_ball(testing::z1(), 4);
  const Graph& g = ball.graph();
  const auto labels = coupling_labels(g, 6, 0);
  const auto origin_edge = g.incident(0)[0].edge;
  double mx = 0.0;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    if (e != origin_edge) mx = std::max(mx, labels[e]);
  }
  CHECK(w_value(g, labels, origin_edge).value == mx);
  CHECK(f_value(g, labels, origin_edge).infinite());
}

TEST_CASE("wired preconditions") {
  const auto g = testing::make_graph(3, {{0, 1}, {1, 2}});
  const std::vector<double> labels{0.2, 0.4};
  CHECK_THROWS_AS(msf_wired(g, labels), Error);
  CHECK_THROWS_AS(w_value(g, labels, 0), Error);
  const auto b = testing::make_graph(3, {{0, 1}, {1, 2}}, {0, 1, 1});
  CHECK_THROWS_AS(w_value(b, labels, 1), Error);
  CHECK_THROWS_AS(msf_free(g, std::vector<double>{0.1}), Error);
}

TEST_CASE("property suite on random labelings") {
  testing::PropertyTally tally;
  testing::check_msf_properties(200, 17, tally);
  for (const auto& f : tally.failures) MESSAGE(f);
  CHECK(tally.failures.empty());
  CHECK(tally.cycles_checked > 0);
}

TEST_CASE("wired root degree on the tree matches the recursion") {
  const double exact = tree_wired_root_degree(10);
  CHECK(exact == doctest::Approx(1.97737).epsilon(1e-4));
  const auto gap = fmsf_wmsf_gap(testing::f2(), 10, 300, 4);
  CHECK(gap.free_root_degree.value == 4.0);
  CHECK(gap.free_root_degree.std_error == 0.0);
  CHECK(std::abs(gap.wired_root_degree.value - exact) <= 4 * gap.wired_root_degree.std_error);
  CHECK(gap.all_wired_components_attached);
  CHECK(gap.free_cost_proxy.value == 2.0);
}

TEST_CASE("forests on Z^2 nearly agree at the origin") {
  const auto gap = fmsf_wmsf_gap(testing::z2(), 24, 60, 4);
  CHECK(std::abs(gap.root_degree_gap.value) <= 0.1);
  CHECK(gap.all_wired_components_attached);
}

}
