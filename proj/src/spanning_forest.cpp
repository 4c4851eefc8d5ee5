#include "cayperc/spanning_forest.hpp"

#include <algorithm>
#include <numeric>

#include "cayperc/bits.hpp"
#include "cayperc/error.hpp"
#include "cayperc/parallel.hpp"
#include "cayperc/rng.hpp"
#include "cayperc/union_find.hpp"

namespace cayperc {

const char* to_string(BoundaryCondition bc) noexcept {
  return bc == BoundaryCondition::Free ? "free" : "wired";
}

std::string Forest::to_hex() const {
  auto all = edges;
  if (wired_attachments.size() == all.size()) all |= wired_attachments;
  return bits_to_hex(all);
}

bool CycleThreshold::keeps(double label, std::uint32_t index) const noexcept {
  if (infinite()) return true;
  if (edge < 0) return false;
  return label < value || (label == value && static_cast<std::int64_t>(index) < edge);
}

namespace {

std::vector<std::uint32_t> edge_order(std::span<const double> labels) {
  std::vector<std::uint32_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return labels[a] < labels[b] || (labels[a] == labels[b] && a < b);
  });
  return order;
}

void check_labels(const Graph& graph, std::span<const double> labels) {
  if (labels.size() != graph.edge_count()) {
    fail(ErrorKind::Precondition, "labeling does not match the graph's edge count");
  }
}

// Vertex map of the contraction: boundary vertices go to index n.
std::vector<std::uint32_t> wired_map(const Graph& graph) {
  if (graph.boundary_count() == 0) {
    fail(ErrorKind::Precondition, "wired boundary condition needs a non-empty boundary");
  }
  const auto n = static_cast<std::uint32_t>(graph.vertex_count());
  std::vector<std::uint32_t> map(n);
  for (std::uint32_t v = 0; v < n; ++v) map[v] = graph.is_boundary(v) ? n : v;
  return map;
}

CycleThreshold minimax(const Graph& graph, std::span<const double> labels, std::uint32_t e,
                       const std::vector<std::uint32_t>* map) {
  check_labels(graph, labels);
  if (e >= graph.edge_count()) fail(ErrorKind::Precondition, "edge index out of range");
  auto vertex = [&](std::uint32_t v) { return map ? (*map)[v] : v; };
  const auto a = vertex(graph.edge(e).u);
  const auto b = vertex(graph.edge(e).v);
  CycleThreshold out;
  if (a == b) {
    out.value = -std::numeric_limits<double>::infinity();
    return out;
  }
  DisjointSet dsu(graph.vertex_count() + 1);
  for (const auto f : edge_order(labels)) {
    if (f == e) continue;
    dsu.unite(vertex(graph.edge(f).u), vertex(graph.edge(f).v));
    if (dsu.same(a, b)) {
      out.value = labels[f];
      out.edge = f;
      return out;
    }
  }
  return out;
}

}  // namespace

Forest msf_free(const Graph& graph, std::span<const double> labels) {
  check_labels(graph, labels);
  Forest out;
  out.boundary_condition = BoundaryCondition::Free;
  out.edges.resize(graph.edge_count());
  DisjointSet dsu(graph.vertex_count());
  for (const auto e : edge_order(labels)) {
    if (dsu.unite(graph.edge(e).u, graph.edge(e).v)) out.edges.set(e);
  }
  return out;
}

Forest msf_wired(const Graph& graph, std::span<const double> labels) {
  check_labels(graph, labels);
  const auto map = wired_map(graph);
  Forest out;
  out.boundary_condition = BoundaryCondition::Wired;
  out.edges.resize(graph.edge_count());
  out.wired_attachments.resize(graph.edge_count());
  DisjointSet dsu(graph.vertex_count() + 1);
  for (const auto e : edge_order(labels)) {
    const auto& edge = graph.edge(e);
    if (!dsu.unite(map[edge.u], map[edge.v])) continue;
    if (graph.is_boundary(edge.u) || graph.is_boundary(edge.v)) {
      out.wired_attachments.set(e);
    } else {
      out.edges.set(e);
    }
  }
  return out;
}

CycleThreshold f_value(const Graph& graph, std::span<const double> labels, std::uint32_t e) {
  return minimax(graph, labels, e, nullptr);
}

CycleThreshold w_value(const Graph& graph, std::span<const double> labels, std::uint32_t e) {
  const auto map = wired_map(graph);
  const auto& edge = graph.edge(e);
  if (graph.is_boundary(edge.u) && graph.is_boundary(edge.v)) {
    fail(ErrorKind::Precondition, "edge lies inside the wired boundary");
  }
  return minimax(graph, labels, e, &map);
}

ForestStats forest_stats(const Forest& forest, const Graph& graph) {
  const bool wired = forest.boundary_condition == BoundaryCondition::Wired;
  ForestStats out;
  auto kept = [&](std::uint32_t e) {
    return forest.edges[e] || (wired && forest.wired_attachments[e]);
  };
  for (const auto& inc : graph.incident(0)) {
    if (kept(inc.edge)) ++out.root_degree;
  }
  out.cost_proxy = static_cast<double>(out.root_degree) / 2.0;

  const auto n = static_cast<std::uint32_t>(graph.vertex_count());
  if (!wired) {
    DisjointSet dsu(n);
    for (std::uint32_t e = 0; e < graph.edge_count(); ++e) {
      if (kept(e)) dsu.unite(graph.edge(e).u, graph.edge(e).v);
    }
    out.component_count = dsu.set_count();
    out.internal_density = n == 0 ? 0.0 : static_cast<double>(forest.edge_count()) / n;
    return out;
  }

  const auto map = wired_map(graph);
  const std::uint32_t hub = n;
  DisjointSet dsu(n + 1);
  for (std::uint32_t e = 0; e < graph.edge_count(); ++e) {
    if (kept(e)) dsu.unite(map[graph.edge(e).u], map[graph.edge(e).v]);
  }
  std::size_t interior = 0;
  std::vector<std::uint8_t> seen(n + 1, 0);
  seen[dsu.find(hub)] = 1;
  out.component_count = 1;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (graph.is_boundary(v)) continue;
    ++interior;
    const auto r = dsu.find(v);
    if (r != dsu.find(hub)) out.all_components_attached = false;
    if (!seen[r]) {
      seen[r] = 1;
      ++out.component_count;
    }
  }
  out.internal_density =
      interior == 0 ? 0.0 : static_cast<double>(forest.edge_count()) / static_cast<double>(interior);
  return out;
}

ForestGap fmsf_wmsf_gap(const GroupPresentation& pres, std::size_t radius, std::size_t trials,
                        std::uint64_t seed) {
  if (radius < 2) fail(ErrorKind::Precondition, "forest comparison needs radius >= 2");
  if (trials == 0) fail(ErrorKind::Precondition, "forest comparison needs at least one trial");
  const auto ball = enumerate_ball(pres, radius, BallMode::Geometric);
  const Graph& graph = ball.graph();

  struct Row {
    GapTrial trial;
    ForestStats free_stats;
    ForestStats wired_stats;
  };
  std::vector<Row> rows(trials);
  parallel_for(trials, [&](std::size_t t) {
    const LabelSource source(seed, t);
    std::vector<double> labels(graph.edge_count());
    for (std::size_t e = 0; e < labels.size(); ++e) labels[e] = source(e);
    const auto free_forest = msf_free(graph, labels);
    const auto wired_forest = msf_wired(graph, labels);
    auto& row = rows[t];
    row.free_stats = forest_stats(free_forest, graph);
    row.wired_stats = forest_stats(wired_forest, graph);
    row.trial.free_root_degree = row.free_stats.root_degree;
    row.trial.wired_root_degree = row.wired_stats.root_degree;
    for (const auto& inc : graph.incident(0)) {
      const bool in_free = free_forest.edges[inc.edge];
      const bool in_wired =
          wired_forest.edges[inc.edge] || wired_forest.wired_attachments[inc.edge];
      if (in_free != in_wired) ++row.trial.origin_symmetric_difference;
    }
  });

  ForestGap out;
  out.radius = radius;
  out.trials = trials;
  std::vector<double> fdeg, wdeg, gap, sym, fcost, wcost, fden, wden;
  for (const auto& row : rows) {
    out.per_trial.push_back(row.trial);
    fdeg.push_back(static_cast<double>(row.trial.free_root_degree));
    wdeg.push_back(static_cast<double>(row.trial.wired_root_degree));
    gap.push_back(fdeg.back() - wdeg.back());
    sym.push_back(static_cast<double>(row.trial.origin_symmetric_difference));
    fcost.push_back(row.free_stats.cost_proxy);
    wcost.push_back(row.wired_stats.cost_proxy);
    fden.push_back(row.free_stats.internal_density);
    wden.push_back(row.wired_stats.internal_density);
    out.all_wired_components_attached =
        out.all_wired_components_attached && row.wired_stats.all_components_attached;
  }
  out.free_root_degree = summarize(fdeg);
  out.wired_root_degree = summarize(wdeg);
  out.root_degree_gap = summarize(gap);
  out.origin_symmetric_difference = summarize(sym);
  out.free_cost_proxy = summarize(fcost);
  out.wired_cost_proxy = summarize(wcost);
  out.free_internal_density = summarize(fden);
  out.wired_internal_density = summarize(wden);
  return out;
}

}  // namespace cayperc
