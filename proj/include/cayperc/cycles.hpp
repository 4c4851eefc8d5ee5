#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cayperc/cayley_ball.hpp"

namespace cayperc {

/// Simple cycles through the origin, each counted once as an unoriented
/// vertex cycle (the edge-set convention on simple graphs).
struct CycleCensus {
  std::size_t n_max = 0;
  std::vector<std::uint64_t> a;  // a[n] for 0 <= n <= n_max
  std::uint64_t paths_visited = 0;

  /// a_n^{1/n} for every n with a_n > 0, as (n, root) pairs.
  std::vector<std::pair<std::size_t, double>> gamma_points() const;
};

inline constexpr std::uint64_t kDefaultCycleCap = 2'000'000'000ULL;

/// Depth-first enumeration from vertex 0 of `graph`. Throws CapExceeded when
/// more than `path_cap` partial paths would be visited.
CycleCensus count_simple_cycles(const Graph& graph, std::size_t n_max,
                                std::uint64_t path_cap = kDefaultCycleCap);

/// Ball version; the ball must have radius >= ceil(n_max / 2) so every cycle
/// of length <= n_max through the origin lies inside it.
CycleCensus count_simple_cycles(const CayleyBall& ball, std::size_t n_max,
                                std::uint64_t path_cap = kDefaultCycleCap);

/// Estimate of gamma = limsup a_n^{1/n}. Never a certified bound.
struct GammaEstimate {
  double gamma_hat = 0.0;
  double max_root = 0.0;              // max_n a_n^{1/n}
  std::optional<double> ratio;        // (a_n2 / a_n1)^{1/(n2 - n1)}, last two nonzero counts
  std::vector<std::pair<std::size_t, double>> points;
  /// gamma_hat < 1: the bound 1/gamma <= p_u says nothing.
  bool vacuous = true;
};

/// gamma_hat is the larger of the maximal root and the growth ratio of the
/// two longest nonzero counts; the root alone carries the subexponential
/// prefactor of a_n and sits well below the limsup at small n.
GammaEstimate gamma_estimate(const CycleCensus& census);

}  // namespace cayperc
