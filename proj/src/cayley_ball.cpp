#include "cayperc/cayley_ball.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "cayperc/error.hpp"

namespace cayperc {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::uint8_t> boundary)
    : edges_(std::move(edges)), boundary_(std::move(boundary)) {
  if (boundary_.size() != vertex_count) {
    fail(ErrorKind::InvalidInput, "boundary flags must cover every vertex");
  }
  offsets_.assign(vertex_count + 1, 0);
  for (const auto& e : edges_) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      fail(ErrorKind::InvalidInput, "edge endpoint out of range");
    }
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidences_.resize(offsets_.back());
  auto cursor = offsets_;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    incidences_[cursor[e.u]++] = {e.v, i};
    incidences_[cursor[e.v]++] = {e.u, i};
  }
}

std::size_t Graph::boundary_count() const noexcept {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 1));
}

namespace {

constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;

std::uint64_t hash_element(std::span<const std::int64_t> a) noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL ^ a.size();
  for (const auto x : a) {
    h ^= static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    h ^= h >> 31;
  }
  return h;
}

// Flat element storage with an open-addressing index (linear probing).
class ElementStore {
 public:
  std::size_t size() const noexcept { return offsets_.size() - 1; }

  std::span<const std::int64_t> at(std::size_t i) const noexcept {
    return {data_.data() + offsets_[i], data_.data() + offsets_[i + 1]};
  }

  std::int64_t find(std::span<const std::int64_t> a) const noexcept {
    if (slots_.empty()) return -1;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash_element(a) & mask;; s = (s + 1) & mask) {
      if (slots_[s] == kEmpty) return -1;
      const auto candidate = at(slots_[s]);
      if (std::equal(candidate.begin(), candidate.end(), a.begin(), a.end())) return slots_[s];
    }
  }

  /// Returns (index, inserted).
  std::pair<std::uint32_t, bool> insert(std::span<const std::int64_t> a) {
    if (2 * (size() + 1) > slots_.size()) grow();
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = hash_element(a) & mask;
    for (;; s = (s + 1) & mask) {
      if (slots_[s] == kEmpty) break;
      const auto candidate = at(slots_[s]);
      if (std::equal(candidate.begin(), candidate.end(), a.begin(), a.end())) {
        return {slots_[s], false};
      }
    }
    const auto index = static_cast<std::uint32_t>(size());
    data_.insert(data_.end(), a.begin(), a.end());
    offsets_.push_back(data_.size());
    slots_[s] = index;
    return {index, true};
  }

  void reindex() {
    std::fill(slots_.begin(), slots_.end(), kEmpty);
    const std::size_t mask = slots_.size() - 1;
    for (std::uint32_t i = 0; i < size(); ++i) {
      std::size_t s = hash_element(at(i)) & mask;
      while (slots_[s] != kEmpty) s = (s + 1) & mask;
      slots_[s] = i;
    }
  }

  std::vector<std::int64_t> data_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> slots_;

 private:
  void grow() {
    slots_.assign(std::max<std::size_t>(64, slots_.size() * 2), kEmpty);
    reindex();
  }
};

}  // namespace

std::vector<std::uint32_t> CayleyBall::boundary() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < vertex_count(); ++v) {
    if (is_boundary(v)) out.push_back(v);
  }
  return out;
}

std::vector<std::uint32_t> CayleyBall::interior() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < vertex_count(); ++v) {
    if (is_interior(v)) out.push_back(v);
  }
  return out;
}

std::size_t CayleyBall::sphere_size(std::size_t n) const {
  return static_cast<std::size_t>(
      std::count(word_length_.begin(), word_length_.end(), static_cast<std::uint32_t>(n)));
}

std::size_t CayleyBall::degree(std::uint32_t v) const {
  if (mode_ == BallMode::Geometric) return graph_.degree(v);
  return out_degree_[v];
}

std::int64_t CayleyBall::find(std::span<const std::int64_t> element) const {
  if (slots_.empty()) return -1;
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t s = hash_element(element) & mask;; s = (s + 1) & mask) {
    if (slots_[s] == kEmpty) return -1;
    const auto candidate = this->element(slots_[s]);
    if (std::equal(candidate.begin(), candidate.end(), element.begin(), element.end())) {
      return slots_[s];
    }
  }
}

CayleyBall enumerate_ball(const GroupPresentation& pres, std::size_t radius, BallMode mode,
                          std::size_t vertex_cap) {
  // Steps for the word metric: distinct non-identity elements of S and S^-1.
  std::vector<Element> steps;
  for (const auto& s : pres.generators()) {
    if (pres.is_identity(s)) continue;
    for (auto candidate : {s, pres.inverse(s)}) {
      if (std::find(steps.begin(), steps.end(), candidate) == steps.end()) {
        steps.push_back(std::move(candidate));
      }
    }
  }

  ElementStore discovered;
  std::vector<std::uint32_t> length;
  discovered.insert(pres.identity());
  length.push_back(0);

  std::size_t layer_begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    const std::size_t layer_end = discovered.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      const Element g(discovered.at(i).begin(), discovered.at(i).end());
      for (const auto& s : steps) {
        const auto h = pres.multiply(g, s);
        if (discovered.insert(h).second) {
          length.push_back(static_cast<std::uint32_t>(r));
          if (discovered.size() > vertex_cap) {
            fail(ErrorKind::CapExceeded,
                 fmt::format("ball of radius {} exceeds the cap of {} vertices", radius, vertex_cap));
          }
        }
      }
    }
    layer_begin = layer_end;
    if (layer_begin == discovered.size()) break;  // finite group exhausted
  }

  // Canonical vertex order: (word length, element key).
  std::vector<std::uint32_t> order(discovered.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (length[a] != length[b]) return length[a] < length[b];
    const auto ea = discovered.at(a), eb = discovered.at(b);
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  });

  CayleyBall ball;
  ball.radius_ = radius;
  ball.mode_ = mode;
  ball.family_size_ = pres.family_size();
  ball.element_offsets_.reserve(order.size() + 1);
  ball.element_offsets_.push_back(0);
  ball.word_length_.reserve(order.size());
  for (const auto old : order) {
    const auto e = discovered.at(old);
    ball.element_data_.insert(ball.element_data_.end(), e.begin(), e.end());
    ball.element_offsets_.push_back(ball.element_data_.size());
    ball.word_length_.push_back(length[old]);
  }
  discovered = ElementStore{};
  std::size_t slot_count = 64;
  while (slot_count < 2 * order.size()) slot_count *= 2;
  ball.slots_.assign(slot_count, kEmpty);
  for (std::uint32_t i = 0; i < ball.vertex_count(); ++i) {
    std::size_t s = hash_element(ball.element(i)) & (slot_count - 1);
    while (ball.slots_[s] != kEmpty) s = (s + 1) & (slot_count - 1);
    ball.slots_[s] = i;
  }

  std::vector<Edge> edges;
  const auto gens = pres.generators();
  if (mode == BallMode::Family) ball.out_degree_.assign(ball.vertex_count(), 0);
  for (std::uint32_t u = 0; u < ball.vertex_count(); ++u) {
    const auto g = ball.element(u);
    for (std::uint32_t i = 0; i < gens.size(); ++i) {
      const auto found = ball.find(pres.multiply(g, gens[i]));
      if (found < 0) continue;
      const auto v = static_cast<std::uint32_t>(found);
      if (mode == BallMode::Family) {
        edges.push_back({u, v, i});
        ++ball.out_degree_[u];
      } else if (u != v) {
        edges.push_back({std::min(u, v), std::max(u, v), i});
      }
    }
  }
  if (mode == BallMode::Geometric) {
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
                edges.end());
  }

  std::vector<std::uint8_t> boundary(ball.vertex_count());
  for (std::uint32_t v = 0; v < ball.vertex_count(); ++v) {
    boundary[v] = ball.word_length_[v] == radius ? 1 : 0;
  }
  ball.graph_ = Graph(ball.vertex_count(), std::move(edges), std::move(boundary));
  return ball;
}

Graph lattice_box(std::size_t side) {
  if (side < 2) fail(ErrorKind::Precondition, "lattice box needs side >= 2");
  const auto n = side * side;
  std::vector<Edge> edges;
  edges.reserve(2 * side * (side - 1));
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const auto v = static_cast<std::uint32_t>(y * side + x);
      if (x + 1 < side) edges.push_back({v, v + 1, 0});
      if (y + 1 < side) edges.push_back({v, static_cast<std::uint32_t>(v + side), 2});
    }
  }
  std::vector<std::uint8_t> boundary(n, 0);
  for (std::size_t y = 0; y < side; ++y) {
    boundary[y * side] = 1;
    boundary[y * side + side - 1] = 1;
  }
  return Graph(n, std::move(edges), std::move(boundary));
}

}  // namespace cayperc
