#include <doctest.h>

#include <cmath>
#include <deque>
#include <random>

#include "cayperc/error.hpp"
#include "cayperc/percolation.hpp"
#include "support.hpp"

using namespace cayperc;

namespace {

// Component label (smallest member) of every vertex by breadth-first search.
std::vector<std::uint32_t> bfs_components(const Configuration& config) {
  const Graph& g = *config.graph;
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(g.vertex_count(), kUnset);
  for (std::uint32_t s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != kUnset) continue;
    std::deque<std::uint32_t> q{s};
    label[s] = s;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop_front();
      for (const auto& inc : g.incident(v)) {
        if (config.open[inc.edge] && label[inc.neighbor] == kUnset) {
          label[inc.neighbor] = s;
          q.push_back(inc.neighbor);
        }
      }
    }
  }
  return label;
}

}  // namespace

TEST_SUITE("percolation") {

TEST_CASE("labels are deterministic and uniform") {
  const auto ball = enumerate_ball(testing::z2(), 7);  // 112 edges
  const auto a = sample_labels(ball.graph(), 42, 0);
  const auto b = sample_labels(ball.graph(), 42, 0);
  const auto c = sample_labels(ball.graph(), 42, 1);
  CHECK(a.labels == b.labels);
  CHECK(a.duplicate_count == 0);
  std::size_t differ = 0;
  for (std::size_t e = 0; e < 100; ++e) differ += a.labels[e] != c.labels[e];
  CHECK(differ >= 99);

  const auto big = enumerate_ball(testing::z2(), 71);  // over 10^4 edges
  const auto labels = sample_labels(big.graph(), 5, 0);
  REQUIRE(labels.labels.size() >= 10000);
  double sum = 0.0;
  for (std::size_t e = 0; e < 10000; ++e) {
    CHECK(labels.labels[e] >= 0.0);
    CHECK(labels.labels[e] < 1.0);
    sum += labels.labels[e];
  }
  CHECK(sum / 10000 >= 0.49);
  CHECK(sum / 10000 <= 0.51);
}

TEST_CASE("thresholding is the monotone coupling") {
  const auto ball = enumerate_ball(testing::f2(), 4);
  const auto labels = sample_labels(ball.graph(), 3, 9);
  CHECK(threshold(labels, 0.0).open_count() == 0);
  CHECK(threshold(labels, 1.0).open_count() == ball.edge_count());
  for (double p1 = 0.0; p1 <= 1.0; p1 += 0.1) {
    const auto low = threshold(labels, p1);
    const auto high = threshold(labels, std::min(1.0, p1 + 0.15));
    CHECK(low.open.is_subset_of(high.open));
    for (std::size_t e = 0; e < labels.labels.size(); ++e) {
      CHECK(low.open[e] == (labels.labels[e] < p1));
    }
  }
  CHECK_THROWS_AS(threshold(labels, 1.5), Error);
}

TEST_CASE("hex export") {
  const auto g = testing::make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  EdgeLabeling labels{&g, {0.1, 0.9, 0.2, 0.3, 0.8}, 0, 0, 0};
  CHECK(threshold(labels, 0.5).to_hex() == "d0");
}

TEST_CASE("clusters match breadth-first search") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    const auto g = testing::random_connected_graph(rng, 12, rng() % 20, 0.3);
    const auto labels = sample_labels(g, 11, static_cast<std::uint64_t>(round));
    const auto config = threshold(labels, 0.5);
    const auto partition = find_clusters(config);
    const auto oracle = bfs_components(config);
    CHECK(partition.root == oracle);
    std::size_t total = 0;
    for (const auto r : partition.representatives()) {
      CHECK(partition.root[r] == r);
      total += partition.cluster_size[r];
      bool touches = false;
      for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        if (oracle[v] == r && g.is_boundary(v)) touches = true;
      }
      CHECK(static_cast<bool>(partition.touches_boundary[r]) == touches);
    }
    CHECK(total == g.vertex_count());
  }
}

TEST_CASE("extreme configurations") {
  const auto ball = enumerate_ball(testing::z2(), 5);
  const auto labels = sample_labels(ball.graph(), 1, 0);
  CHECK(find_clusters(threshold(labels, 0.0)).cluster_count() == ball.vertex_count());
  const auto full = find_clusters(threshold(labels, 1.0));
  CHECK(full.cluster_count() == 1);
  CHECK(full.size_of(0) == ball.vertex_count());
}

TEST_CASE("p_c estimator preconditions") {
  CHECK_THROWS_AS(estimate_pc(testing::z2(), 7, 10, PcMethod::Invasion, 1), Error);
  CHECK_THROWS_AS(estimate_pc(testing::z2(), 16, 0, PcMethod::Invasion, 1), Error);
  CHECK_THROWS_AS(estimate_pc(testing::f2(), 16, 10, PcMethod::Crossing, 1), Error);
}

TEST_CASE("p_c of Z is 1") {
  const auto est = estimate_pc(testing::z1(), 64, 200, PcMethod::Invasion, 5);
  CHECK(est.pc_hat >= 0.95);
  CHECK(est.used_trials == 200);
}

TEST_CASE("relative threshold at p = 1 estimates the same p_c") {
  const auto base = estimate_pc(testing::z2(), 48, 200, PcMethod::Crossing, 8);
  const auto rel = relative_pc(testing::z2(), 48, 1.0, 200, PcMethod::Crossing, 8);
  const double joint = std::hypot(base.std_error, rel.std_error);
  CHECK(std::abs(base.pc_hat - rel.pc_hat) <= 3 * joint + 1e-9);
}

TEST_CASE("relative threshold on T_4") {
  const auto rel = relative_pc(testing::f2(), 12, 0.9, 300, PcMethod::Invasion, 13);
  CHECK(rel.pc_hat == doctest::Approx(1.0 / 3.0 / 0.9).epsilon(0.03 / 0.37));
  CHECK_THROWS_AS(relative_pc(testing::f2(), 10, 0.2, 50, PcMethod::Invasion, 13), Error);
}

TEST_CASE("exploration at p = 0 and p = 1") {
  const auto ball = enumerate_ball(testing::z2(), 6);
  const auto labels = sample_labels(ball.graph(), 4, 0);
  const auto none = exploration_sequence(labels, 0.0, 0);
  REQUIRE(none.stop);
  CHECK(*none.stop == 4);
  CHECK(none.cluster_size_at_stop == 1);
  CHECK(none.cluster_boundary_at_stop == 4);
  for (const auto b : none.bits) CHECK(b == 0);

  const auto all = exploration_sequence(labels, 1.0, 0);
  CHECK_FALSE(all.stop);
  CHECK(all.truncated);
  CHECK(all.bits.size() == ball.vertex_count() - 1);
  for (const auto b : all.bits) CHECK(b == 1);
}

TEST_CASE("exploration bookkeeping on finite clusters") {
  const auto ball = enumerate_ball(testing::z2(), 10);
  std::size_t finite = 0;
  for (std::uint64_t t = 0; t < 300; ++t) {
    const auto labels = sample_labels(ball.graph(), 77, t);
    const auto trace = exploration_sequence(labels, 0.45, 0);
    const auto partition = find_clusters(threshold(labels, 0.45));
    if (!trace.stop) {
      CHECK(partition.touches_boundary[partition.root[0]]);
      continue;
    }
    ++finite;
    const std::size_t n = *trace.stop;
    const std::size_t m = partition.size_of(0);
    CHECK(trace.cluster_size_at_stop == m);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) ones += trace.bits[i];
    CHECK(ones == m - 1);
    // Recompute the edge boundary of C(omega; 0).
    std::vector<std::uint32_t> members;
    for (std::uint32_t v = 0; v < ball.vertex_count(); ++v) {
      if (partition.root[v] == partition.root[0]) members.push_back(v);
    }
    std::size_t boundary = 0;
    for (const auto& e : ball.graph().edges()) {
      const bool a = partition.root[e.u] == partition.root[0];
      const bool b = partition.root[e.v] == partition.root[0];
      boundary += a != b;
    }
    CHECK(trace.cluster_boundary_at_stop == boundary);
    CHECK(n >= boundary + m - 1);
  }
  CHECK(finite > 100);
}

TEST_CASE("cluster census") {
  const auto ball = enumerate_ball(testing::z2(), 8);
  const auto labels = sample_labels(ball.graph(), 2, 0);
  // At p = 0 only the singleton boundary vertices reach the boundary.
  const auto empty = cluster_census(threshold(labels, 0.0), 1);
  CHECK(empty.qualifying == ball.boundary().size());
  CHECK(cluster_census(threshold(labels, 0.0), 2).qualifying == 0);
  const auto full = cluster_census(threshold(labels, 1.0), 1);
  CHECK(full.qualifying == 1);
  CHECK(full.largest == ball.vertex_count());
  CHECK(full.second_largest == 0);
  CHECK(std::string(kCensusCaveat) == "heuristic proxy for N_p");
}

TEST_CASE("census in the uniqueness and non-uniqueness regimes") {
  const auto z2 = enumerate_ball(testing::z2(), 64);
  std::size_t unique = 0;
  const std::size_t trials = 60;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto labels = sample_labels(z2.graph(), 21, t);
    unique += cluster_census(threshold(labels, 0.7), 100).qualifying == 1;
  }
  CHECK(static_cast<double>(unique) >= 0.95 * trials);

  const auto tree = enumerate_ball(testing::f2(), 10);
  std::size_t several = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto labels = sample_labels(tree.graph(), 22, t);
    several += cluster_census(threshold(labels, 0.5), 20).qualifying >= 2;
  }
  CHECK(static_cast<double>(several) >= 0.8 * trials);
}

TEST_CASE("coupled containment") {
  const auto tree = enumerate_ball(testing::f2(), 10);
  const auto labels = sample_labels(tree.graph(), 31, 0);
  const auto same = coupled_containment(labels, 0.6, 0.6, 20);
  REQUIRE(same);
  CHECK(*same == 1.0);
  const auto all = coupled_containment(labels, 0.5, 1.0, 20);
  REQUIRE(all);
  CHECK(*all == 1.0);
  CHECK_THROWS_AS(coupled_containment(labels, 0.7, 0.6, 20), Error);

  // Above p_c on Z^2 the large boundary cluster is unique, so it contains
  // the large cluster from the lower level.
  const auto lattice = enumerate_ball(testing::z2(), 48);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::uint64_t t = 0; t < 60; ++t) {
    const auto f = coupled_containment(sample_labels(lattice.graph(), 32, t), 0.6, 0.7, 100);
    if (f) {
      sum += *f;
      ++counted;
    }
  }
  REQUIRE(counted > 50);
  CHECK(sum / static_cast<double>(counted) >= 0.9);
}

TEST_CASE("graphing cost") {
  const auto half = graphing_cost(testing::z2(), 2, 0.5, 20000, 6);
  CHECK(half.value == doctest::Approx(1.0).epsilon(0.02));
  CHECK(graphing_cost(testing::z2(), 2, 0.0, 100, 6).value == 0.0);
  CHECK(graphing_cost(testing::f2(), 2, 1.0, 100, 6).value == 2.0);
}

TEST_CASE("exploration bit statistics") {
  std::vector<ExplorationTrace> traces(1);
  traces[0].bits = {1, 0, 1, 0, 1, 0, 1, 0};
  const auto s = exploration_bit_statistics(traces, 0.5);
  CHECK(s.count == 8);
  CHECK(s.pairs == 7);
  CHECK(s.mean == 0.5);
  CHECK(s.lag1 == doctest::Approx(-1.0));
}

TEST_CASE("sweep shapes") {
  const auto sweep = percolation_sweep(testing::z2(), 8, {0.9, 0.1, 0.5}, 10, 8, 3);
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].p == 0.9);
  CHECK(sweep[0].origin_reaches_boundary.value >= sweep[1].origin_reaches_boundary.value);
  CHECK(sweep[2].exploration.count > 0);
}

}
