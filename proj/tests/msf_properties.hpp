#pragma once
// Property checks for minimal spanning forests against brute-force cycle
// enumeration. Shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cayperc/spanning_forest.hpp"
#include "cayperc/union_find.hpp"
#include "support.hpp"

namespace cayperc::testing {

struct PropertyTally {
  std::size_t labelings = 0;
  std::size_t brute_force_graphs = 0;
  std::size_t cycles_checked = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Edge index between two vertices of a simple graph, or -1.
inline std::vector<std::vector<std::int64_t>> edge_matrix(const Graph& g) {
  std::vector<std::vector<std::int64_t>> m(g.vertex_count(),
                                           std::vector<std::int64_t>(g.vertex_count(), -1));
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    m[g.edge(e).u][g.edge(e).v] = m[g.edge(e).v][g.edge(e).u] = e;
  }
  return m;
}

/// Every simple cycle (length >= 3) as a list of edge indices.
inline std::vector<std::vector<std::uint32_t>> all_simple_cycles(const Graph& g) {
  const auto m = edge_matrix(g);
  const auto n = static_cast<std::uint32_t>(g.vertex_count());
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<std::uint32_t> path;
  std::vector<std::uint8_t> on(n, 0);
  std::function<void(std::uint32_t, std::uint32_t)> dfs = [&](std::uint32_t s, std::uint32_t v) {
    for (std::uint32_t u = s; u < n; ++u) {
      if (m[v][u] < 0) continue;
      if (u == s) {
        if (path.size() >= 3 && path[1] < path.back()) {
          std::vector<std::uint32_t> edges;
          for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            edges.push_back(static_cast<std::uint32_t>(m[path[i]][path[i + 1]]));
          }
          edges.push_back(static_cast<std::uint32_t>(m[path.back()][s]));
          cycles.push_back(edges);
        }
        continue;
      }
      if (on[u]) continue;
      on[u] = 1;
      path.push_back(u);
      dfs(s, u);
      path.pop_back();
      on[u] = 0;
    }
  };
  for (std::uint32_t s = 0; s < n; ++s) {
    path = {s};
    on[s] = 1;
    dfs(s, s);
    on[s] = 0;
  }
  return cycles;
}

/// inf over simple cycles through e of the largest other label.
inline double brute_force_f(const std::vector<std::vector<std::uint32_t>>& cycles,
                            const std::vector<double>& labels, std::uint32_t e) {
  double best = kInf;
  for (const auto& c : cycles) {
    if (std::find(c.begin(), c.end(), e) == c.end()) continue;
    double mx = -kInf;
    for (const auto f : c) {
      if (f != e) mx = std::max(mx, labels[f]);
    }
    best = std::min(best, mx);
  }
  return best;
}

inline bool acyclic(const Graph& g, const Forest& forest) {
  const bool wired = forest.boundary_condition == BoundaryCondition::Wired;
  const auto n = static_cast<std::uint32_t>(g.vertex_count());
  DisjointSet dsu(n + 1);
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    const bool kept = forest.edges[e] || (wired && forest.wired_attachments[e]);
    if (!kept) continue;
    auto u = g.edge(e).u, v = g.edge(e).v;
    if (wired) {
      if (g.is_boundary(u)) u = n;
      if (g.is_boundary(v)) v = n;
    }
    if (!dsu.unite(u, v)) return false;
  }
  return true;
}

inline bool same_forest(const Forest& a, const Forest& b) {
  return a.edges == b.edges && a.wired_attachments == b.wired_attachments;
}

/// Random connected graph with at most 200 edges and a non-empty boundary.
inline Graph random_property_graph(std::mt19937_64& rng, bool small) {
  const std::size_t n = small ? 3 + rng() % 8 : 11 + rng() % 60;
  const std::size_t max_extra = std::min<std::size_t>(200 - (n - 1), n * (n - 1) / 2 - (n - 1));
  const std::size_t extra = max_extra == 0 ? 0 : rng() % (max_extra + 1);
  auto g = random_connected_graph(rng, n, extra, 0.3);
  if (g.boundary_count() == 0) {
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    std::vector<std::uint8_t> boundary(g.boundary_flags().begin(), g.boundary_flags().end());
    boundary[n - 1] = 1;
    g = Graph(n, std::move(edges), std::move(boundary));
  }
  return g;
}

inline void check_msf_properties(std::size_t labelings, std::uint64_t seed, PropertyTally& tally) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t round = 0; round < labelings; ++round) {
    const bool small = round % 2 == 0;
    const auto g = random_property_graph(rng, small);
    std::vector<double> labels(g.edge_count());
    for (auto& x : labels) x = unit(rng);
    const auto tag = fmt::format("labeling {} ({} vertices, {} edges)", round, g.vertex_count(),
                                 g.edge_count());
    ++tally.labelings;

    const auto free_forest = msf_free(g, labels);
    const auto wired_forest = msf_wired(g, labels);
    tally.expect(acyclic(g, free_forest), tag + ": free forest has a cycle");
    tally.expect(acyclic(g, wired_forest), tag + ": wired forest has a cycle");
    tally.expect(free_forest.edge_count() == g.vertex_count() - 1,
                 tag + ": free forest of a connected graph is not a spanning tree");
    tally.expect(wired_forest.edges.is_subset_of(free_forest.edges),
                 tag + ": wired internal edges not contained in the free forest");
    tally.expect(wired_forest.wired_attachments.is_subset_of(free_forest.edges),
                 tag + ": wired attachments not contained in the free forest");

    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
      const auto f = f_value(g, labels, e);
      tally.expect(free_forest.edges[e] == f.keeps(labels[e], e),
                   fmt::format("{}: edge {} membership disagrees with f", tag, e));
      const bool both_boundary = g.is_boundary(g.edge(e).u) && g.is_boundary(g.edge(e).v);
      if (!both_boundary) {
        const auto w = w_value(g, labels, e);
        const bool in_wired = wired_forest.edges[e] || wired_forest.wired_attachments[e];
        tally.expect(in_wired == w.keeps(labels[e], e),
                     fmt::format("{}: edge {} wired membership disagrees with w", tag, e));
        tally.expect(w.value <= f.value, fmt::format("{}: w > f on edge {}", tag, e));
      }
    }

    if (small) {
      ++tally.brute_force_graphs;
      const auto cycles = all_simple_cycles(g);
      for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const double brute = brute_force_f(cycles, labels, e);
        tally.expect(f_value(g, labels, e).value == brute,
                     fmt::format("{}: f_value of edge {} differs from cycle enumeration", tag, e));
      }
      for (const auto& c : cycles) {
        ++tally.cycles_checked;
        const auto top = *std::max_element(c.begin(), c.end(), [&](auto a, auto b) {
          return labels[a] < labels[b];
        });
        const bool in_wired = wired_forest.edges[top] || wired_forest.wired_attachments[top];
        tally.expect(!free_forest.edges[top] && !in_wired,
                     fmt::format("{}: maximal edge {} of a cycle kept", tag, top));
      }
    }

    for (const auto& transform : std::vector<std::function<double(double)>>{
             [](double x) { return std::exp(3.0 * x); },
             [](double x) { return x * x * x - 2.0; },
             [](double x) { return 0.5 + 0.25 * x; }}) {
      std::vector<double> relabeled(labels.size());
      std::transform(labels.begin(), labels.end(), relabeled.begin(), transform);
      tally.expect(same_forest(msf_free(g, relabeled), free_forest),
                   tag + ": free forest changed under a monotone relabeling");
      tally.expect(same_forest(msf_wired(g, relabeled), wired_forest),
                   tag + ": wired forest changed under a monotone relabeling");
    }
  }
}

}  // namespace cayperc::testing
