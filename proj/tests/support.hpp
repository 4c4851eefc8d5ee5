#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cayperc/cayley_ball.hpp"
#include "cayperc/group.hpp"

namespace cayperc::testing {

inline GroupPresentation z1() { return parse_presentation("family = lattice\nd = 1"); }
inline GroupPresentation z2() { return parse_presentation("family = lattice\nd = 2"); }
inline GroupPresentation f2() { return parse_presentation("family = free\nk = 2"); }

inline Graph make_graph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                        std::vector<std::uint8_t> boundary = {}) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < pairs.size(); ++i) edges.push_back({pairs[i].first, pairs[i].second, i});
  if (boundary.empty()) boundary.assign(n, 0);
  return Graph(n, std::move(edges), std::move(boundary));
}

/// Connected simple graph: a random spanning tree plus extra random edges.
inline Graph random_connected_graph(std::mt19937_64& rng, std::size_t n, std::size_t extra,
                                    double boundary_fraction = 0.0) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::vector<std::uint8_t>> adj(n, std::vector<std::uint8_t>(n, 0));
  auto add = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b || adj[a][b]) return false;
    adj[a][b] = adj[b][a] = 1;
    pairs.emplace_back(a, b);
    return true;
  };
  for (std::uint32_t v = 1; v < n; ++v) {
    add(static_cast<std::uint32_t>(rng() % v), v);
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  for (std::size_t i = 0; i < extra && pairs.size() < max_edges;) {
    if (add(static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n))) ++i;
  }
  std::vector<std::uint8_t> boundary(n, 0);
  std::bernoulli_distribution coin(boundary_fraction);
  for (std::size_t v = 1; v < n; ++v) boundary[v] = coin(rng) ? 1 : 0;
  return make_graph(n, pairs, boundary);
}

}  // namespace cayperc::testing
