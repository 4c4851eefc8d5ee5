#include <doctest.h>

#include <set>

#include "cayperc/cayley_ball.hpp"
#include "cayperc/error.hpp"
#include "support.hpp"

using namespace cayperc;

TEST_SUITE("ball") {

TEST_CASE("small balls") {
  const auto z = enumerate_ball(testing::z1(), 3);
  CHECK(z.vertex_count() == 7);
  CHECK(z.edge_count() == 6);

  const auto z2 = enumerate_ball(testing::z2(), 1);
  CHECK(z2.vertex_count() == 5);
  CHECK(z2.edge_count() == 4);

  const auto f2 = enumerate_ball(testing::f2(), 2);
  CHECK(f2.vertex_count() == 17);
  CHECK(f2.edge_count() == 16);
}

TEST_CASE("origin, boundary and interior") {
  const auto ball = enumerate_ball(testing::z2(), 3);
  CHECK(ball.word_length(0) == 0);
  CHECK(ball.element(0)[0] == 0);
  CHECK(ball.boundary().size() == 12);
  CHECK(ball.interior().size() == 13);
  CHECK(ball.graph().boundary_count() == 12);
  for (const auto v : ball.boundary()) CHECK(ball.word_length(v) == 3);
}

TEST_CASE("free group spheres grow like 2k(2k-1)^(r-1)") {
  for (int k = 1; k <= 3; ++k) {
    const auto pres = parse_presentation("family = free\nk = " + std::to_string(k));
    const auto ball = enumerate_ball(pres, 6);
    std::size_t expected = 2 * static_cast<std::size_t>(k);
    for (std::size_t r = 1; r <= 6; ++r) {
      CHECK(ball.sphere_size(r) == expected);
      expected *= 2 * static_cast<std::size_t>(k) - 1;
    }
  }
}

TEST_CASE("balls are nested") {
  for (const auto& pres : {testing::z2(), testing::f2()}) {
    const auto small = enumerate_ball(pres, 3);
    const auto big = enumerate_ball(pres, 4);
    std::size_t inner = 0;
    for (std::uint32_t v = 0; v < big.vertex_count(); ++v) {
      if (big.word_length(v) > 3) continue;
      ++inner;
      const auto idx = small.find(big.element(v));
      REQUIRE(idx >= 0);
      CHECK(small.word_length(static_cast<std::uint32_t>(idx)) == big.word_length(v));
    }
    CHECK(inner == small.vertex_count());
  }
}

TEST_CASE("geometric mode is simple, family mode keeps multiplicity") {
  const auto lazy = lazify(testing::f2());
  const auto geo = enumerate_ball(lazy, 3, BallMode::Geometric);
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& e : geo.graph().edges()) {
    CHECK(e.u != e.v);
    CHECK(pairs.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second);
  }
  for (const auto v : geo.interior()) CHECK(geo.degree(v) == 4);

  const auto fam = enumerate_ball(lazy, 3, BallMode::Family);
  for (const auto v : fam.interior()) CHECK(fam.degree(v) == 5);
  std::size_t loops = 0;
  for (const auto& e : fam.graph().edges()) loops += e.u == e.v;
  CHECK(loops == fam.vertex_count());
}

TEST_CASE("ball caps") {
  CHECK_THROWS_AS(enumerate_ball(testing::f2(), 12, BallMode::Geometric, 1000), Error);
}

TEST_CASE("lattice box") {
  const auto box = lattice_box(4);
  CHECK(box.vertex_count() == 16);
  CHECK(box.edge_count() == 24);
  CHECK(box.boundary_count() == 8);
  CHECK(box.is_boundary(0));
  CHECK(box.is_boundary(3));
  CHECK_FALSE(box.is_boundary(1));
}

}
