#pragma once
// Bernoulli bond percolation through the standard coupling: every edge gets a
// uniform label x(e) and the configuration at level p keeps the edges with
// x(e) < p.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cayperc/cayley_ball.hpp"
#include "cayperc/group.hpp"
#include "cayperc/rng.hpp"
#include "cayperc/stats.hpp"

namespace cayperc {

struct EdgeLabeling {
  const Graph* graph = nullptr;
  std::vector<double> labels;  // by edge index, in [0, 1)
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  /// Equal label pairs; ties are broken by edge index wherever order matters.
  std::size_t duplicate_count = 0;
};

EdgeLabeling sample_labels(const Graph& graph, std::uint64_t seed, std::uint64_t trial,
                           LabelStream stream = LabelStream::Coupling);

struct Configuration {
  const Graph* graph = nullptr;
  double p = 0.0;
  boost::dynamic_bitset<> open;  // by edge index

  std::size_t open_count() const { return open.count(); }
  /// Nibble j holds edges 4j..4j+3, lowest bit first.
  std::string to_hex() const;
};

Configuration threshold(const EdgeLabeling& labels, double p);

struct ClusterPartition {
  std::vector<std::uint32_t> root;             // vertex -> representative
  std::vector<std::uint32_t> cluster_size;     // valid at representatives
  std::vector<std::uint8_t> touches_boundary;  // valid at representatives

  std::size_t cluster_count() const;
  std::vector<std::uint32_t> representatives() const;
  std::uint32_t size_of(std::uint32_t v) const { return cluster_size[root[v]]; }
};

ClusterPartition find_clusters(const Configuration& config);

enum class PcMethod { Invasion, Crossing };

const char* to_string(PcMethod method) noexcept;
PcMethod parse_pc_method(std::string_view text);

struct PcEstimate {
  double pc_hat = 0.0;
  double std_error = 0.0;
  PcMethod method = PcMethod::Invasion;
  std::size_t radius = 0;
  std::size_t trials = 0;        // trials requested
  std::size_t used_trials = 0;   // trials that produced a statistic
  std::vector<double> per_trial;  // statistic per used trial, in trial order
};

inline constexpr std::size_t kMinPcRadius = 8;

/// Invasion: grow the invaded set from the origin by the minimum-label
/// boundary edge until it reaches the ball boundary; the trial statistic is
/// the largest accepted label once the set exceeds half its final size.
/// Crossing (Z^2 only): L x L box with L = radius, p_c at the level where the
/// left-right crossing frequency passes 1/2, found by bisection.
PcEstimate estimate_pc(const GroupPresentation& pres, std::size_t radius, std::size_t trials,
                       PcMethod method, std::uint64_t seed);

/// p_c of the environment pi_p(x): the coupling labels fix the open
/// subgraph, an independent second labeling drives the estimator inside it.
PcEstimate relative_pc(const GroupPresentation& pres, std::size_t radius, double p,
                       std::size_t trials, PcMethod method, std::uint64_t seed);

struct ExplorationTrace {
  std::vector<std::uint8_t> bits;
  /// Index k at which step (a) fired; empty when the explored cluster reached
  /// the ball boundary, so finiteness could not be decided.
  std::optional<std::size_t> stop;
  std::size_t cluster_size_at_stop = 0;
  std::size_t cluster_boundary_at_stop = 0;  // |dE C| recomputed at the stop
  /// The sequence ended because the finite ball ran out of edges.
  bool truncated = false;
};

/// Explores C(omega; v) with the edge order given by global edge index,
/// rotated so the lowest-indexed edge at v comes first. After a stop the
/// remaining edges beyond the largest explored position are read in order.
ExplorationTrace exploration_sequence(const EdgeLabeling& labels, double p, std::uint32_t v);

/// Pooled frequency and lag-1 autocorrelation of exploration bits, with the
/// standard deviations both would have under i.i.d. Bernoulli(p) bits.
struct BitStatistics {
  std::size_t count = 0;
  std::size_t pairs = 0;     // adjacent pairs within a trace
  double mean = 0.0;
  double mean_sigma = 0.0;   // sqrt(p (1 - p) / count)
  double lag1 = 0.0;         // pooled lag-1 autocorrelation
  double lag1_sigma = 0.0;   // 1 / sqrt(pairs)
};

BitStatistics exploration_bit_statistics(const std::vector<ExplorationTrace>& traces, double p);

struct ClusterCensus {
  std::size_t size_floor = 0;
  std::size_t qualifying = 0;  // boundary-touching clusters of size >= floor
  std::size_t largest = 0;
  std::size_t second_largest = 0;
  std::size_t cluster_count = 0;
};

/// Counting boundary-touching clusters is a heuristic proxy for N_p: finite
/// clusters can reach the boundary and infinite ones do not exist here.
inline constexpr const char* kCensusCaveat = "heuristic proxy for N_p";

ClusterCensus cluster_census(const Configuration& config, std::size_t size_floor);
ClusterCensus cluster_census(const ClusterPartition& partition, std::size_t size_floor);

/// Fraction of qualifying p2-clusters that contain a qualifying p1-cluster,
/// on one labeling. Empty when no p2-cluster qualifies.
std::optional<double> coupled_containment(const EdgeLabeling& labels, double p1, double p2,
                                          std::size_t size_floor);

/// Mean number of open generator edges at the origin, one per generator map.
Estimate graphing_cost(const GroupPresentation& pres, std::size_t radius, double p,
                       std::size_t trials, std::uint64_t seed);

struct SweepPoint {
  double p = 0.0;
  Estimate origin_reaches_boundary;  // indicator of the origin cluster touching the boundary
  Estimate origin_cluster_size;
  Estimate qualifying_clusters;
  Estimate unique_fraction;          // indicator of exactly one qualifying cluster
  Estimate largest_cluster;
  BitStatistics exploration;          // origin explorations pooled over trials
};

std::vector<SweepPoint> percolation_sweep(const GroupPresentation& pres, std::size_t radius,
                                          const std::vector<double>& p_grid,
                                          std::size_t trials, std::size_t size_floor,
                                          std::uint64_t seed);

}  // namespace cayperc
