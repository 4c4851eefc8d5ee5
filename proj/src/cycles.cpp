#include "cayperc/cycles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>

#include <fmt/format.h>

#include "cayperc/error.hpp"
#include "cayperc/parallel.hpp"

namespace cayperc {

std::vector<std::pair<std::size_t, double>> CycleCensus::gamma_points() const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t n = 3; n < a.size(); ++n) {
    if (a[n] > 0) {
      out.emplace_back(n, std::pow(static_cast<double>(a[n]), 1.0 / static_cast<double>(n)));
    }
  }
  return out;
}

namespace {

std::vector<std::uint32_t> distances_from_origin(const Graph& graph) {
  constexpr auto kFar = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(graph.vertex_count(), kFar);
  std::deque<std::uint32_t> queue{0};
  dist[0] = 0;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto& inc : graph.incident(v)) {
      if (dist[inc.neighbor] == kFar) {
        dist[inc.neighbor] = dist[v] + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return dist;
}

struct CycleWalker {
  const Graph& graph;
  const std::vector<std::uint32_t>& dist;
  std::size_t n_max;
  std::uint64_t cap;
  std::atomic<std::uint64_t>& visited_total;
  std::vector<std::uint8_t> on_path;
  std::vector<std::uint64_t> counts;
  std::uint32_t first = 0;
  std::uint64_t visited = 0;
  std::uint64_t pending = 0;

  void charge() {
    ++visited;
    if (++pending == 4096) flush();
  }
  void flush() {
    const auto total = visited_total.fetch_add(pending) + pending;
    pending = 0;
    if (total > cap) {
      fail(ErrorKind::CapExceeded,
           fmt::format("cycle census exceeded the cap of {} partial paths", cap));
    }
  }

  // Path 0, first, ..., v with `length` edges so far.
  void extend(std::uint32_t v, std::size_t length) {
    charge();
    for (const auto& inc : graph.incident(v)) {
      const auto u = inc.neighbor;
      if (u == 0) {
        // Close the cycle; count it once by requiring first < last.
        if (length + 1 >= 3 && first < v) ++counts[length + 1];
        continue;
      }
      if (on_path[u] || length + 1 + dist[u] > n_max) continue;
      on_path[u] = 1;
      extend(u, length + 1);
      on_path[u] = 0;
    }
  }
};

}  // namespace

CycleCensus count_simple_cycles(const Graph& graph, std::size_t n_max, std::uint64_t path_cap) {
  if (graph.vertex_count() == 0) fail(ErrorKind::Precondition, "empty graph");
  CycleCensus census;
  census.n_max = n_max;
  census.a.assign(n_max + 1, 0);
  const auto dist = distances_from_origin(graph);

  std::vector<std::uint32_t> firsts;
  for (const auto& inc : graph.incident(0)) {
    if (inc.neighbor != 0) firsts.push_back(inc.neighbor);
  }
  std::sort(firsts.begin(), firsts.end());
  firsts.erase(std::unique(firsts.begin(), firsts.end()), firsts.end());

  std::atomic<std::uint64_t> visited_total{0};
  std::vector<std::vector<std::uint64_t>> counts(firsts.size());
  std::vector<std::uint64_t> visited(firsts.size());
  parallel_for(firsts.size(), [&](std::size_t i) {
    CycleWalker walker{graph, dist, n_max, path_cap, visited_total,
                       std::vector<std::uint8_t>(graph.vertex_count(), 0),
                       std::vector<std::uint64_t>(n_max + 1, 0)};
    walker.first = firsts[i];
    walker.on_path[0] = 1;
    walker.on_path[firsts[i]] = 1;
    if (n_max >= 3) walker.extend(firsts[i], 1);
    walker.flush();
    counts[i] = std::move(walker.counts);
    visited[i] = walker.visited;
  });
  for (std::size_t i = 0; i < firsts.size(); ++i) {
    for (std::size_t n = 0; n <= n_max; ++n) census.a[n] += counts[i][n];
    census.paths_visited += visited[i];
  }
  return census;
}

CycleCensus count_simple_cycles(const CayleyBall& ball, std::size_t n_max,
                                std::uint64_t path_cap) {
  if (ball.mode() != BallMode::Geometric) {
    fail(ErrorKind::Precondition, "cycle census needs a geometric-mode ball");
  }
  const auto needed = (n_max + 1) / 2;
  if (ball.radius() < needed) {
    fail(ErrorKind::Precondition,
         fmt::format("cycles of length {} need a ball of radius {}, got {}", n_max, needed,
                     ball.radius()));
  }
  return count_simple_cycles(ball.graph(), n_max, path_cap);
}

GammaEstimate gamma_estimate(const CycleCensus& census) {
  GammaEstimate out;
  out.points = census.gamma_points();
  for (const auto& [n, root] : out.points) out.max_root = std::max(out.max_root, root);
  if (out.points.size() >= 2) {
    const auto [n1, r1] = out.points[out.points.size() - 2];
    const auto [n2, r2] = out.points.back();
    const double log_ratio = std::log(static_cast<double>(census.a[n2])) -
                             std::log(static_cast<double>(census.a[n1]));
    out.ratio = std::exp(log_ratio / static_cast<double>(n2 - n1));
  }
  out.gamma_hat = std::max(out.max_root, out.ratio.value_or(0.0));
  out.vacuous = out.gamma_hat < 1.0;
  return out;
}

}  // namespace cayperc
