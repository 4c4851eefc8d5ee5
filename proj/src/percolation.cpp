#include "cayperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "cayperc/bits.hpp"
#include "cayperc/error.hpp"
#include "cayperc/parallel.hpp"
#include "cayperc/union_find.hpp"

namespace cayperc {

EdgeLabeling sample_labels(const Graph& graph, std::uint64_t seed, std::uint64_t trial,
                           LabelStream stream) {
  EdgeLabeling out;
  out.graph = &graph;
  out.seed = seed;
  out.trial = trial;
  const LabelSource source(seed, trial, stream);
  out.labels.resize(graph.edge_count());
  for (std::size_t e = 0; e < out.labels.size(); ++e) out.labels[e] = source(e);
  auto sorted = out.labels;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) ++out.duplicate_count;
  }
  return out;
}

std::string Configuration::to_hex() const { return bits_to_hex(open); }

Configuration threshold(const EdgeLabeling& labels, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Precondition, "p must lie in [0, 1]");
  Configuration out;
  out.graph = labels.graph;
  out.p = p;
  out.open.resize(labels.labels.size());
  for (std::size_t e = 0; e < labels.labels.size(); ++e) {
    if (labels.labels[e] < p) out.open.set(e);
  }
  return out;
}

std::size_t ClusterPartition::cluster_count() const {
  std::size_t count = 0;
  for (std::size_t v = 0; v < root.size(); ++v) count += root[v] == v;
  return count;
}

std::vector<std::uint32_t> ClusterPartition::representatives() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < root.size(); ++v) {
    if (root[v] == v) out.push_back(v);
  }
  return out;
}

ClusterPartition find_clusters(const Configuration& config) {
  const Graph& graph = *config.graph;
  const auto n = graph.vertex_count();
  DisjointSet dsu(n);
  for (std::size_t e = config.open.find_first(); e != boost::dynamic_bitset<>::npos;
       e = config.open.find_next(e)) {
    dsu.unite(graph.edge(e).u, graph.edge(e).v);
  }
  ClusterPartition out;
  out.root.resize(n);
  out.cluster_size.assign(n, 0);
  out.touches_boundary.assign(n, 0);
  // Representatives are the smallest vertex of each cluster, independent of
  // union order.
  std::vector<std::uint32_t> smallest(n, std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t v = 0; v < n; ++v) {
    auto& s = smallest[dsu.find(v)];
    s = std::min(s, v);
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto r = smallest[dsu.find(v)];
    out.root[v] = r;
    ++out.cluster_size[r];
    if (graph.is_boundary(v)) out.touches_boundary[r] = 1;
  }
  return out;
}

const char* to_string(PcMethod method) noexcept {
  return method == PcMethod::Invasion ? "invasion" : "crossing";
}

PcMethod parse_pc_method(std::string_view text) {
  if (text == "invasion") return PcMethod::Invasion;
  if (text == "crossing") return PcMethod::Crossing;
  fail(ErrorKind::InvalidInput, fmt::format("unknown p_c method '{}'", text));
}

namespace {

using EdgeFilter = std::function<bool(std::uint32_t)>;

// Invasion from the origin. Returns the trial statistic, or nothing when the
// allowed subgraph confines the origin away from the boundary.
std::optional<double> invasion_statistic(const CayleyBall& ball, const LabelSource& label,
                                         const EdgeFilter& allowed) {
  const Graph& graph = ball.graph();
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<std::uint8_t> invaded(graph.vertex_count(), 0);
  std::vector<double> accepted;

  auto absorb = [&](std::uint32_t v) {
    invaded[v] = 1;
    for (const auto& inc : graph.incident(v)) {
      if (invaded[inc.neighbor] || (allowed && !allowed(inc.edge))) continue;
      heap.emplace(label(inc.edge), inc.edge);
    }
  };

  absorb(0);
  bool reached = ball.is_boundary(0);
  while (!reached && !heap.empty()) {
    const auto [x, e] = heap.top();
    heap.pop();
    const auto& edge = graph.edge(e);
    if (invaded[edge.u] && invaded[edge.v]) continue;
    const auto v = invaded[edge.u] ? edge.v : edge.u;
    accepted.push_back(x);
    absorb(v);
    reached = ball.is_boundary(v);
  }
  if (!reached || accepted.empty()) return std::nullopt;

  // After accepting accepted[i] the invaded set has i + 2 vertices.
  const double final_size = static_cast<double>(accepted.size() + 1);
  double stat = 0.0;
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (static_cast<double>(i + 2) > final_size / 2.0) stat = std::max(stat, accepted[i]);
  }
  return stat;
}

// Smallest level at which an open left-right crossing of the box exists, or
// 1 when none exists among the allowed edges.
double crossing_level(const Graph& box, std::size_t side, const LabelSource& label,
                      const EdgeFilter& allowed) {
  using Item = std::pair<double, std::uint32_t>;
  std::vector<Item> order;
  order.reserve(box.edge_count());
  for (std::uint32_t e = 0; e < box.edge_count(); ++e) {
    if (allowed && !allowed(e)) continue;
    order.emplace_back(label(e), e);
  }
  std::sort(order.begin(), order.end());
  const auto n = static_cast<std::uint32_t>(box.vertex_count());
  const std::uint32_t left = n, right = n + 1;
  DisjointSet dsu(n + 2);
  for (std::uint32_t y = 0; y < side; ++y) {
    dsu.unite(left, static_cast<std::uint32_t>(y * side));
    dsu.unite(right, static_cast<std::uint32_t>(y * side + side - 1));
  }
  for (const auto& [x, e] : order) {
    dsu.unite(box.edge(e).u, box.edge(e).v);
    if (dsu.same(left, right)) return x;
  }
  return 1.0;
}

// Bisection on the empirical crossing frequency F(p) = #{t_i < p} / n.
double bisect_half(const std::vector<double>& levels) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto below = std::count_if(levels.begin(), levels.end(),
                                     [&](double t) { return t < mid; });
    if (2 * static_cast<std::size_t>(below) < levels.size()) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Half-width of the order-statistic interval n/2 +- sqrt(n)/2, the
// binomial one-sigma band around the sample median.
double median_std_error(std::vector<double> levels) {
  std::sort(levels.begin(), levels.end());
  const double n = static_cast<double>(levels.size());
  const double half = std::sqrt(n) / 2.0;
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(n / 2.0 - half)));
  const auto hi = static_cast<std::size_t>(std::min(n - 1.0, std::ceil(n / 2.0 + half) - 1.0));
  return 0.5 * (levels[hi] - levels[lo]);
}

void check_pc_inputs(const GroupPresentation& pres, std::size_t radius, std::size_t trials,
                     PcMethod method) {
  if (radius < kMinPcRadius) {
    fail(ErrorKind::Precondition,
         fmt::format("radius {} is below the minimum {} for p_c estimation", radius, kMinPcRadius));
  }
  if (trials == 0) fail(ErrorKind::Precondition, "p_c estimation needs at least one trial");
  if (method == PcMethod::Crossing && !(pres.is_standard_lattice() && pres.rank() == 2)) {
    fail(ErrorKind::Precondition, "the crossing estimator needs the standard Z^2 presentation");
  }
}

PcEstimate run_pc(const GroupPresentation& pres, std::size_t radius, std::size_t trials,
                  PcMethod method, std::uint64_t seed, std::optional<double> environment_p) {
  check_pc_inputs(pres, radius, trials, method);
  PcEstimate out;
  out.method = method;
  out.radius = radius;
  out.trials = trials;
  std::vector<std::optional<double>> stats(trials);

  // With an environment the coupling stream fixes which edges exist and the
  // second stream drives the estimator.
  const auto estimator_stream =
      environment_p ? LabelStream::Environment : LabelStream::Coupling;
  auto filter_for = [&](std::size_t t) -> EdgeFilter {
    if (!environment_p) return {};
    const LabelSource coupling(seed, t, LabelStream::Coupling);
    const double p = *environment_p;
    return [coupling, p](std::uint32_t e) { return coupling(e) < p; };
  };

  if (method == PcMethod::Invasion) {
    const auto ball = enumerate_ball(pres, radius, BallMode::Geometric);
    parallel_for(trials, [&](std::size_t t) {
      stats[t] = invasion_statistic(ball, LabelSource(seed, t, estimator_stream), filter_for(t));
    });
  } else {
    const auto box = lattice_box(radius);
    parallel_for(trials, [&](std::size_t t) {
      const double level =
          crossing_level(box, radius, LabelSource(seed, t, estimator_stream), filter_for(t));
      // Level 1 means no crossing at any p < 1; it still counts towards F(p).
      stats[t] = level;
    });
  }

  std::vector<double> values;
  for (const auto& s : stats) {
    if (s) values.push_back(*s);
  }
  out.per_trial = values;
  if (method == PcMethod::Invasion) {
    out.used_trials = values.size();
    if (2 * out.used_trials < trials) {
      fail(ErrorKind::Precondition,
           fmt::format("the origin reached the boundary in only {} of {} trials; the open "
                       "subgraph has no giant component at this p",
                       out.used_trials, trials));
    }
    const auto est = summarize(values);
    out.pc_hat = est.value;
    out.std_error = est.std_error;
  } else {
    out.used_trials = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](double t) { return t < 1.0; }));
    if (2 * out.used_trials < trials) {
      fail(ErrorKind::Precondition,
           fmt::format("the box was crossed in only {} of {} trials; the open subgraph has no "
                       "giant component at this p",
                       out.used_trials, trials));
    }
    out.pc_hat = bisect_half(values);
    out.std_error = median_std_error(values);
  }
  return out;
}

}  // namespace

PcEstimate estimate_pc(const GroupPresentation& pres, std::size_t radius, std::size_t trials,
                       PcMethod method, std::uint64_t seed) {
  return run_pc(pres, radius, trials, method, seed, std::nullopt);
}

PcEstimate relative_pc(const GroupPresentation& pres, std::size_t radius, double p,
                       std::size_t trials, PcMethod method, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::Precondition, "p must lie in (0, 1]");
  return run_pc(pres, radius, trials, method, seed, p);
}

ExplorationTrace exploration_sequence(const EdgeLabeling& labels, double p, std::uint32_t v) {
  const Graph& graph = *labels.graph;
  const auto edge_total = static_cast<std::uint32_t>(graph.edge_count());
  if (v >= graph.vertex_count()) fail(ErrorKind::Precondition, "start vertex outside the graph");
  if (graph.degree(v) == 0) fail(ErrorKind::Precondition, "start vertex has no incident edge");

  std::uint32_t first = edge_total;
  for (const auto& inc : graph.incident(v)) first = std::min(first, inc.edge);
  auto edge_at = [&](std::uint32_t pos) { return (pos + first) % edge_total; };
  auto position = [&](std::uint32_t e) { return (e + edge_total - first) % edge_total; };
  auto open = [&](std::uint32_t e) { return labels.labels[e] < p; };

  ExplorationTrace trace;
  std::vector<std::uint8_t> in_v(graph.vertex_count(), 0);
  std::vector<std::uint8_t> explored(edge_total, 0);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> candidates;
  std::size_t cluster = 0;
  bool touches = false;

  auto add_vertex = [&](std::uint32_t u) {
    in_v[u] = 1;
    ++cluster;
    touches = touches || graph.is_boundary(u);
    for (const auto& inc : graph.incident(u)) candidates.push(position(inc.edge));
  };
  auto select = [&](std::uint32_t pos) {
    const auto e = edge_at(pos);
    explored[e] = 1;
    const bool bit = open(e);
    trace.bits.push_back(bit ? 1 : 0);
    if (bit) {
      const auto& edge = graph.edge(e);
      if (!in_v[edge.u]) add_vertex(edge.u);
      if (!in_v[edge.v]) add_vertex(edge.v);
    }
  };

  add_vertex(v);
  std::uint32_t last_position = 0;
  select(0);
  while (true) {
    // Least-indexed unexplored edge with exactly one endpoint in V. Entries
    // that fail the test stay invalid because V and E only grow.
    std::optional<std::uint32_t> next;
    while (!candidates.empty()) {
      const auto pos = candidates.top();
      candidates.pop();
      const auto e = edge_at(pos);
      const auto& edge = graph.edge(e);
      if (!explored[e] && (in_v[edge.u] != in_v[edge.v])) {
        next = pos;
        break;
      }
    }
    if (!next) break;
    last_position = std::max(last_position, *next);
    select(*next);
  }

  trace.cluster_size_at_stop = cluster;
  if (touches) {
    // The cluster reached the edge of the ball, so whether step (a) fires in
    // the infinite graph is unknown.
    trace.truncated = true;
    return trace;
  }
  trace.stop = trace.bits.size();
  for (const auto& edge : graph.edges()) {
    if (in_v[edge.u] != in_v[edge.v]) ++trace.cluster_boundary_at_stop;
  }
  for (std::uint32_t pos = last_position + 1; pos < edge_total; ++pos) {
    trace.bits.push_back(open(edge_at(pos)) ? 1 : 0);
  }
  trace.truncated = true;
  return trace;
}

BitStatistics exploration_bit_statistics(const std::vector<ExplorationTrace>& traces,
                                         double p) {
  BitStatistics out;
  double ones = 0.0;
  for (const auto& t : traces) {
    out.count += t.bits.size();
    for (const auto b : t.bits) ones += b;
  }
  if (out.count == 0) return out;
  const double n = static_cast<double>(out.count);
  out.mean = ones / n;
  out.mean_sigma = std::sqrt(p * (1.0 - p) / n);
  double cov = 0.0, var = 0.0;
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < t.bits.size(); ++i) {
      const double x = t.bits[i] - out.mean;
      var += x * x;
      if (i + 1 < t.bits.size()) {
        cov += x * (t.bits[i + 1] - out.mean);
        ++out.pairs;
      }
    }
  }
  if (out.pairs > 0) {
    out.lag1 = var > 0.0 ? (cov / static_cast<double>(out.pairs)) / (var / n) : 0.0;
    out.lag1_sigma = 1.0 / std::sqrt(static_cast<double>(out.pairs));
  }
  return out;
}

ClusterCensus cluster_census(const Configuration& config, std::size_t size_floor) {
  return cluster_census(find_clusters(config), size_floor);
}

ClusterCensus cluster_census(const ClusterPartition& partition, std::size_t size_floor) {
  ClusterCensus out;
  out.size_floor = size_floor;
  for (const auto r : partition.representatives()) {
    const std::size_t size = partition.cluster_size[r];
    ++out.cluster_count;
    if (partition.touches_boundary[r] && size >= size_floor) ++out.qualifying;
    if (size > out.largest) {
      out.second_largest = out.largest;
      out.largest = size;
    } else if (size > out.second_largest) {
      out.second_largest = size;
    }
  }
  return out;
}

std::optional<double> coupled_containment(const EdgeLabeling& labels, double p1, double p2,
                                          std::size_t size_floor) {
  if (p1 > p2) fail(ErrorKind::Precondition, "coupled containment needs p1 <= p2");
  const auto low = find_clusters(threshold(labels, p1));
  const auto high = find_clusters(threshold(labels, p2));
  auto qualifies = [&](const ClusterPartition& part, std::uint32_t r) {
    return part.touches_boundary[r] && part.cluster_size[r] >= size_floor;
  };
  std::vector<std::uint8_t> contains(high.root.size(), 0);
  for (const auto r : low.representatives()) {
    if (qualifies(low, r)) contains[high.root[r]] = 1;
  }
  std::size_t total = 0, hit = 0;
  for (const auto r : high.representatives()) {
    if (!qualifies(high, r)) continue;
    ++total;
    hit += contains[r];
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(hit) / static_cast<double>(total);
}

Estimate graphing_cost(const GroupPresentation& pres, std::size_t radius, double p,
                       std::size_t trials, std::uint64_t seed) {
  if (radius == 0) fail(ErrorKind::Precondition, "graphing cost needs radius >= 1");
  if (trials == 0) fail(ErrorKind::Precondition, "graphing cost needs at least one trial");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Precondition, "p must lie in [0, 1]");
  const auto ball = enumerate_ball(pres, radius, BallMode::Geometric);
  std::vector<std::uint32_t> map_edges;
  for (const auto i : generator_maps(pres)) {
    const auto target = ball.find(pres.generators()[i]);
    for (const auto& inc : ball.graph().incident(0)) {
      if (static_cast<std::int64_t>(inc.neighbor) == target) {
        map_edges.push_back(inc.edge);
        break;
      }
    }
  }
  std::vector<double> counts(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const LabelSource label(seed, t);
    double c = 0;
    for (const auto e : map_edges) c += label(e) < p ? 1.0 : 0.0;
    counts[t] = c;
  }
  return summarize(counts);
}

std::vector<SweepPoint> percolation_sweep(const GroupPresentation& pres, std::size_t radius,
                                          const std::vector<double>& p_grid,
                                          std::size_t trials, std::size_t size_floor,
                                          std::uint64_t seed) {
  if (trials == 0) fail(ErrorKind::Precondition, "percolation sweep needs at least one trial");
  for (const double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Precondition, "p must lie in [0, 1]");
  }
  const auto ball = enumerate_ball(pres, radius, BallMode::Geometric);
  const auto np = p_grid.size();
  enum Field { Reach, OriginSize, Qualifying, Unique, Largest, FieldCount };
  // samples[field][point][trial]
  std::vector<std::vector<std::vector<double>>> samples(
      FieldCount, std::vector<std::vector<double>>(np, std::vector<double>(trials)));
  std::vector<std::vector<ExplorationTrace>> traces(np, std::vector<ExplorationTrace>(trials));
  parallel_for(trials, [&](std::size_t t) {
    const auto labels = sample_labels(ball.graph(), seed, t);
    for (std::size_t i = 0; i < np; ++i) {
      const auto config = threshold(labels, p_grid[i]);
      const auto partition = find_clusters(config);
      const auto census = cluster_census(partition, size_floor);
      const auto r0 = partition.root[0];
      samples[Reach][i][t] = partition.touches_boundary[r0] ? 1.0 : 0.0;
      samples[OriginSize][i][t] = partition.cluster_size[r0];
      samples[Qualifying][i][t] = static_cast<double>(census.qualifying);
      samples[Unique][i][t] = census.qualifying == 1 ? 1.0 : 0.0;
      samples[Largest][i][t] = static_cast<double>(census.largest);
      traces[i][t] = exploration_sequence(labels, p_grid[i], 0);
    }
  });
  std::vector<SweepPoint> out(np);
  for (std::size_t i = 0; i < np; ++i) {
    out[i].p = p_grid[i];
    out[i].origin_reaches_boundary = summarize(samples[Reach][i]);
    out[i].origin_cluster_size = summarize(samples[OriginSize][i]);
    out[i].qualifying_clusters = summarize(samples[Qualifying][i]);
    out[i].unique_fraction = summarize(samples[Unique][i]);
    out[i].largest_cluster = summarize(samples[Largest][i]);
    out[i].exploration = exploration_bit_statistics(traces[i], p_grid[i]);
  }
  return out;
}

}  // namespace cayperc
