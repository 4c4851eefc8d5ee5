#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cayperc/group.hpp"

namespace cayperc {

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t generator = 0;  // index into the generating family
};

struct Incidence {
  std::uint32_t neighbor;
  std::uint32_t edge;
};

/// Finite undirected multigraph with a marked boundary and origin 0. This is
/// the universe every simulation runs on: Cayley balls, lattice boxes and the
/// random graphs used by property tests.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::uint8_t> boundary);

  std::size_t vertex_count() const noexcept { return boundary_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const noexcept { return edges_[e]; }

  std::span<const Incidence> incident(std::uint32_t v) const noexcept {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  /// Number of edge ends at v (a loop counts twice).
  std::size_t degree(std::uint32_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool is_boundary(std::uint32_t v) const noexcept { return boundary_[v] != 0; }
  std::span<const std::uint8_t> boundary_flags() const noexcept { return boundary_; }
  std::size_t boundary_count() const noexcept;

 private:
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> boundary_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Incidence> incidences_;
};

/// Radius-r truncation of Cay(Gamma, S).
///
/// Vertices are ordered by (word length, element key) with the identity at
/// index 0. In geometric mode the edge set is the simple graph {g, gs}, s != 1,
/// one record per unordered pair, sorted by (u, v). In family mode there is one
/// record (g, gs_i, i) per generator application that stays inside the ball,
/// so loops and parallel edges carry family multiplicity and every interior
/// vertex has out-degree |S|.
class CayleyBall {
 public:
  std::size_t radius() const noexcept { return radius_; }
  BallMode mode() const noexcept { return mode_; }
  const Graph& graph() const noexcept { return graph_; }
  std::size_t vertex_count() const noexcept { return word_length_.size(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  std::size_t family_size() const noexcept { return family_size_; }

  std::span<const std::int64_t> element(std::uint32_t v) const noexcept {
    return {element_data_.data() + element_offsets_[v],
            element_data_.data() + element_offsets_[v + 1]};
  }
  std::uint32_t word_length(std::uint32_t v) const noexcept { return word_length_[v]; }
  std::span<const std::uint32_t> word_lengths() const noexcept { return word_length_; }

  bool is_boundary(std::uint32_t v) const noexcept { return word_length_[v] == radius_; }
  bool is_interior(std::uint32_t v) const noexcept { return word_length_[v] < radius_; }
  std::vector<std::uint32_t> boundary() const;
  std::vector<std::uint32_t> interior() const;
  /// Number of vertices with word length exactly n.
  std::size_t sphere_size(std::size_t n) const;

  /// Geometric mode: number of distinct neighbours. Family mode: number of
  /// generator applications out of v.
  std::size_t degree(std::uint32_t v) const;

  /// Index of an element, or -1 when it lies outside the ball.
  std::int64_t find(std::span<const std::int64_t> element) const;

 private:
  friend CayleyBall enumerate_ball(const GroupPresentation&, std::size_t, BallMode, std::size_t);

  std::size_t radius_ = 0;
  BallMode mode_ = BallMode::Geometric;
  std::size_t family_size_ = 0;
  std::vector<std::int64_t> element_data_;
  std::vector<std::size_t> element_offsets_;
  std::vector<std::uint32_t> word_length_;
  std::vector<std::uint32_t> slots_;  // open-addressing index over elements
  std::vector<std::uint32_t> out_degree_;  // family mode only
  Graph graph_;
};

inline constexpr std::size_t kDefaultBallCap = 5'000'000;

/// Breadth-first enumeration by word length over S and S^-1. Throws
/// CapExceeded when the ball would exceed `vertex_cap` vertices.
CayleyBall enumerate_ball(const GroupPresentation& pres, std::size_t radius,
                          BallMode mode = BallMode::Geometric,
                          std::size_t vertex_cap = kDefaultBallCap);

/// L x L block of Z^2 with nearest-neighbour edges; vertex (x, y) has index
/// y * L + x. Boundary flags mark the left (x = 0) and right (x = L-1) columns.
Graph lattice_box(std::size_t side);

}  // namespace cayperc
