#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cayperc/cayley_ball.hpp"

namespace cayperc {

enum class SearchMode { Exhaustive, Heuristic };

const char* to_string(SearchMode mode) noexcept;

/// Subset caps up to this size are searched exhaustively.
inline constexpr std::size_t kExhaustiveLimit = 18;

/// Upper bound on iota_E from explicit finite subsets F of the ball interior.
/// Every F whose vertices all lie at distance <= r-1 has its full edge
/// boundary inside the ball, so |dF|/|F| bounds the infinite-graph constant.
struct IsoperimetricReport {
  double iota_upper = 0.0;
  std::size_t witness_boundary = 0;
  std::vector<std::uint32_t> witness;         // sorted vertex indices
  std::size_t subset_cap = 0;
  SearchMode mode = SearchMode::Exhaustive;
  /// Exhaustive and the ball radius is at least the cap, so every connected
  /// set containing the origin of size <= cap was examined.
  bool certified = false;
  std::vector<std::size_t> min_boundary_by_size;  // index s - 1
  std::uint64_t subsets_examined = 0;
  std::size_t degree = 0;                          // geometric degree at the origin
  /// Slope of min |dF| against |F| over the upper half of sizes (estimate).
  std::optional<double> iota_extrapolated;
  /// d (1 - rho_upper) when a spectral bound was supplied.
  std::optional<double> iota_lower_from_rho;
};

IsoperimetricReport isoperimetric_search(const CayleyBall& ball, std::size_t subset_cap,
                                         std::optional<double> rho_upper = std::nullopt,
                                         std::size_t exhaustive_limit = kExhaustiveLimit);

/// Number of edges with exactly one endpoint in `subset`.
std::size_t edge_boundary_size(const Graph& graph, std::span<const std::uint32_t> subset);

double boundary_ratio(const Graph& graph, std::span<const std::uint32_t> subset);

}  // namespace cayperc
