#include "cayperc/isoperimetric.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "cayperc/error.hpp"
#include "cayperc/parallel.hpp"
#include "cayperc/walk.hpp"

namespace cayperc {

const char* to_string(SearchMode mode) noexcept {
  return mode == SearchMode::Exhaustive ? "exhaustive" : "heuristic";
}

std::size_t edge_boundary_size(const Graph& graph, std::span<const std::uint32_t> subset) {
  std::vector<std::uint8_t> member(graph.vertex_count(), 0);
  for (const auto v : subset) member[v] = 1;
  std::size_t count = 0;
  for (const auto& e : graph.edges()) {
    if (member[e.u] != member[e.v]) ++count;
  }
  return count;
}

double boundary_ratio(const Graph& graph, std::span<const std::uint32_t> subset) {
  if (subset.empty()) fail(ErrorKind::Precondition, "boundary ratio of an empty set");
  return static_cast<double>(edge_boundary_size(graph, subset)) /
         static_cast<double>(subset.size());
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Best {
  std::size_t boundary = kNone;
  std::vector<std::uint32_t> witness;  // sorted

  // Smaller ratio wins; equal ratios go to the lexicographically smaller set.
  bool improved_by(std::size_t b, const std::vector<std::uint32_t>& members) const {
    if (boundary == kNone) return true;
    const auto lhs = static_cast<std::uint64_t>(b) * witness.size();
    const auto rhs = static_cast<std::uint64_t>(boundary) * members.size();
    if (lhs != rhs) return lhs < rhs;
    return std::lexicographical_compare(members.begin(), members.end(), witness.begin(),
                                        witness.end());
  }
};

// Enumerates connected vertex sets containing the origin, each exactly once,
// by extending with "exclusive" neighbours of the newest vertex (those not
// yet adjacent to the set).
class SubsetSearch {
 public:
  SubsetSearch(const CayleyBall& ball, std::size_t cap)
      : ball_(ball),
        graph_(ball.graph()),
        cap_(cap),
        in_set_(ball.vertex_count(), 0),
        touch_(ball.vertex_count(), 0),
        min_boundary_(cap, kNone) {}

  void add(std::uint32_t v, std::size_t& boundary) {
    std::size_t inside = 0;
    for (const auto& inc : graph_.incident(v)) {
      if (in_set_[inc.neighbor]) ++inside;
      ++touch_[inc.neighbor];
    }
    boundary = boundary + graph_.degree(v) - 2 * inside;
    in_set_[v] = 1;
    members_.insert(std::lower_bound(members_.begin(), members_.end(), v), v);
  }

  void remove(std::uint32_t v) {
    for (const auto& inc : graph_.incident(v)) --touch_[inc.neighbor];
    in_set_[v] = 0;
    members_.erase(std::lower_bound(members_.begin(), members_.end(), v));
  }

  void record(std::size_t boundary) {
    ++examined_;
    auto& slot = min_boundary_[members_.size() - 1];
    slot = std::min(slot, boundary);
    if (best_.improved_by(boundary, members_)) {
      best_.boundary = boundary;
      best_.witness = members_;
    }
  }

  std::vector<std::uint32_t> exclusive_neighbors(std::uint32_t v) const {
    std::vector<std::uint32_t> out;
    for (const auto& inc : graph_.incident(v)) {
      const auto u = inc.neighbor;
      if (ball_.is_interior(u) && !in_set_[u] && touch_[u] == 0) out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void extend(const std::vector<std::uint32_t>& frontier, std::size_t boundary) {
    if (members_.size() >= cap_) return;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const auto v = frontier[i];
      std::vector<std::uint32_t> next(frontier.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                      frontier.end());
      const auto fresh = exclusive_neighbors(v);
      next.insert(next.end(), fresh.begin(), fresh.end());
      auto b = boundary;
      add(v, b);
      record(b);
      extend(next, b);
      remove(v);
    }
  }

  const CayleyBall& ball_;
  const Graph& graph_;
  std::size_t cap_;
  std::vector<std::uint8_t> in_set_;
  std::vector<std::uint16_t> touch_;
  std::vector<std::uint32_t> members_;
  std::vector<std::size_t> min_boundary_;
  Best best_;
  std::uint64_t examined_ = 0;
};

void finish_report(IsoperimetricReport& report, const Best& best, const Graph& graph) {
  if (edge_boundary_size(graph, best.witness) != best.boundary) {
    fail(ErrorKind::Precondition, "isoperimetric witness does not reproduce its boundary size");
  }
  report.witness = best.witness;
  report.witness_boundary = best.boundary;
  report.iota_upper =
      static_cast<double>(best.boundary) / static_cast<double>(best.witness.size());

  // Slope of min boundary against size over the upper half of sizes.
  const auto& mins = report.min_boundary_by_size;
  std::vector<double> xs, ys;
  for (std::size_t s = mins.size() / 2 + 1; s <= mins.size(); ++s) {
    if (mins[s - 1] == kNone) continue;
    xs.push_back(static_cast<double>(s));
    ys.push_back(static_cast<double>(mins[s - 1]));
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    report.iota_extrapolated = std::clamp(sxy / sxx, 0.0, report.iota_upper);
  }
}

IsoperimetricReport exhaustive(const CayleyBall& ball, std::size_t cap) {
  const Graph& graph = ball.graph();
  IsoperimetricReport report;
  report.subset_cap = cap;
  report.mode = SearchMode::Exhaustive;
  report.certified = ball.radius() >= cap;

  // Root set {origin}, then one task per first extension choice.
  SubsetSearch root(ball, cap);
  std::size_t root_boundary = 0;
  root.add(0, root_boundary);
  root.record(root_boundary);
  std::vector<std::uint32_t> first;
  for (const auto& inc : graph.incident(0)) {
    if (ball.is_interior(inc.neighbor) && inc.neighbor != 0) first.push_back(inc.neighbor);
  }
  std::sort(first.begin(), first.end());
  first.erase(std::unique(first.begin(), first.end()), first.end());

  struct TaskResult {
    Best best;
    std::vector<std::size_t> mins;
    std::uint64_t examined = 0;
  };
  std::vector<TaskResult> results(cap > 1 ? first.size() : 0);
  parallel_for(results.size(), [&](std::size_t i) {
    SubsetSearch search(ball, cap);
    std::size_t b = 0;
    search.add(0, b);
    // Frontier after the origin is `first`; choosing first[i] excludes first[0..i).
    std::vector<std::uint32_t> next(first.begin() + static_cast<std::ptrdiff_t>(i + 1), first.end());
    const auto fresh = search.exclusive_neighbors(first[i]);
    next.insert(next.end(), fresh.begin(), fresh.end());
    search.add(first[i], b);
    search.record(b);
    search.extend(next, b);
    results[i] = {std::move(search.best_), std::move(search.min_boundary_), search.examined_};
  });

  Best best = root.best_;
  report.min_boundary_by_size = root.min_boundary_;
  report.subsets_examined = root.examined_;
  for (const auto& r : results) {
    if (r.best.boundary != kNone && best.improved_by(r.best.boundary, r.best.witness)) {
      best = r.best;
    }
    for (std::size_t s = 0; s < cap; ++s) {
      report.min_boundary_by_size[s] = std::min(report.min_boundary_by_size[s], r.mins[s]);
    }
    report.subsets_examined += r.examined;
  }
  finish_report(report, best, graph);
  return report;
}

// Greedy growth from the origin: always add the frontier vertex that raises
// the boundary least (lowest index on ties).
IsoperimetricReport heuristic(const CayleyBall& ball, std::size_t cap) {
  const Graph& graph = ball.graph();
  IsoperimetricReport report;
  report.subset_cap = cap;
  report.mode = SearchMode::Heuristic;
  report.certified = false;
  report.min_boundary_by_size.assign(cap, kNone);

  std::vector<std::uint8_t> in_set(ball.vertex_count(), 0);
  std::vector<std::uint32_t> inside_count(ball.vertex_count(), 0);
  std::vector<std::uint32_t> frontier;
  std::vector<std::uint32_t> members;
  std::size_t boundary = 0;
  Best best;

  auto add = [&](std::uint32_t v) {
    boundary = boundary + graph.degree(v) - 2 * inside_count[v];
    in_set[v] = 1;
    members.insert(std::lower_bound(members.begin(), members.end(), v), v);
    for (const auto& inc : graph.incident(v)) {
      const auto u = inc.neighbor;
      if (in_set[u] || !ball.is_interior(u)) continue;
      if (inside_count[u]++ == 0) frontier.push_back(u);
    }
    report.min_boundary_by_size[members.size() - 1] = boundary;
    ++report.subsets_examined;
    if (best.improved_by(boundary, members)) {
      best.boundary = boundary;
      best.witness = members;
    }
  };

  add(0);
  while (members.size() < cap) {
    std::size_t pick = kNone;
    long best_increase = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const auto u = frontier[i];
      const long increase =
          static_cast<long>(graph.degree(u)) - 2 * static_cast<long>(inside_count[u]);
      if (increase < best_increase || (increase == best_increase && u < frontier[pick])) {
        best_increase = increase;
        pick = i;
      }
    }
    if (pick == kNone) break;
    const auto v = frontier[pick];
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
    add(v);
  }
  finish_report(report, best, graph);
  return report;
}

}  // namespace

IsoperimetricReport isoperimetric_search(const CayleyBall& ball, std::size_t subset_cap,
                                         std::optional<double> rho_upper,
                                         std::size_t exhaustive_limit) {
  if (ball.mode() != BallMode::Geometric) {
    fail(ErrorKind::Precondition, "isoperimetric search needs a geometric-mode ball");
  }
  if (subset_cap == 0) fail(ErrorKind::Precondition, "subset cap must be positive");
  const auto interior = ball.interior().size();
  if (interior < subset_cap) {
    fail(ErrorKind::Precondition,
         fmt::format("ball interior has {} vertices, fewer than the subset cap {}", interior,
                     subset_cap));
  }
  auto report = subset_cap <= exhaustive_limit ? exhaustive(ball, subset_cap)
                                               : heuristic(ball, subset_cap);
  report.degree = ball.degree(0);
  if (rho_upper) report.iota_lower_from_rho = mohar_lower_bound(report.degree, *rho_upper);
  return report;
}

}  // namespace cayperc
