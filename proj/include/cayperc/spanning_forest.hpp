#pragma once
// Free and wired minimal spanning forests of a finite graph with a marked
// boundary. Edge order is (label, edge index), so ties never need special
// handling downstream.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cayperc/cayley_ball.hpp"
#include "cayperc/group.hpp"
#include "cayperc/stats.hpp"

namespace cayperc {

enum class BoundaryCondition { Free, Wired };

const char* to_string(BoundaryCondition bc) noexcept;

struct Forest {
  BoundaryCondition boundary_condition = BoundaryCondition::Free;
  /// Free: every kept edge. Wired: kept edges with both endpoints interior.
  boost::dynamic_bitset<> edges;
  /// Wired only: kept edges from an interior vertex to the boundary, which
  /// are attachments to the contracted boundary vertex.
  boost::dynamic_bitset<> wired_attachments;

  std::size_t edge_count() const { return edges.count() + wired_attachments.count(); }
  std::string to_hex() const;
};

Forest msf_free(const Graph& graph, std::span<const double> labels);

/// Contracts all boundary vertices to one vertex and takes the minimal
/// spanning forest. Edges between two boundary vertices become loops and are
/// never kept.
Forest msf_wired(const Graph& graph, std::span<const double> labels);

/// Minimax value over cycles through an edge: the smallest (label, index) key
/// such that the endpoints of e are joined without e using only edges up to
/// that key. Infinite when e is a bridge; minus infinity for a loop.
struct CycleThreshold {
  double value = std::numeric_limits<double>::infinity();
  std::int64_t edge = -1;  // edge attaining the value, -1 when infinite or a loop

  bool infinite() const noexcept { return value == std::numeric_limits<double>::infinity(); }
  /// Whether an edge with key (label, index) lies strictly below the threshold.
  bool keeps(double label, std::uint32_t index) const noexcept;
};

CycleThreshold f_value(const Graph& graph, std::span<const double> labels, std::uint32_t e);

/// f-value in the boundary-contracted graph.
CycleThreshold w_value(const Graph& graph, std::span<const double> labels, std::uint32_t e);

struct ForestStats {
  std::size_t root_degree = 0;
  double internal_density = 0.0;
  std::size_t component_count = 0;
  double cost_proxy = 0.0;  // root_degree / 2
  /// Wired only: every component contains the contracted boundary vertex.
  bool all_components_attached = true;
};

ForestStats forest_stats(const Forest& forest, const Graph& graph);

struct GapTrial {
  std::size_t free_root_degree = 0;
  std::size_t wired_root_degree = 0;
  std::size_t origin_symmetric_difference = 0;  // origin edges in exactly one forest
};

struct ForestGap {
  std::size_t radius = 0;
  std::size_t trials = 0;
  Estimate free_root_degree;
  Estimate wired_root_degree;
  Estimate root_degree_gap;               // paired free - wired
  Estimate origin_symmetric_difference;
  Estimate free_cost_proxy;
  Estimate wired_cost_proxy;
  Estimate free_internal_density;
  Estimate wired_internal_density;
  bool all_wired_components_attached = true;
  std::vector<GapTrial> per_trial;
};

ForestGap fmsf_wmsf_gap(const GroupPresentation& pres, std::size_t radius, std::size_t trials,
                        std::uint64_t seed);

}  // namespace cayperc
