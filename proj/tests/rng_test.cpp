#include <doctest.h>

#include "cayperc/rng.hpp"

using cayperc::Philox4x64;

TEST_SUITE("rng") {

// Known-answer vectors of the Random123 distribution for philox4x64-10.
TEST_CASE("philox4x64-10 known answers") {
  using C = Philox4x64::Counter;
  CHECK(Philox4x64::block({0, 0, 0, 0}, {0, 0}) ==
        C{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
          0x7e68b68aec7ba23bULL});
  CHECK(Philox4x64::block({~0ULL, ~0ULL, ~0ULL, ~0ULL}, {~0ULL, ~0ULL}) ==
        C{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL,
          0xa09caebf594f0ba0ULL});
  CHECK(Philox4x64::block({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                           0x082efa98ec4e6c89ULL},
                          {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}) ==
        C{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL,
          0x57bd43b5e52b7fe6ULL});
}

TEST_CASE("the block function is usable at compile time") {
  constexpr auto out = Philox4x64::block({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x16554d9eca36314cULL);
  CHECK(out[3] == 0x7e68b68aec7ba23bULL);
}

TEST_CASE("unit interval mapping") {
  CHECK(cayperc::to_unit_interval(0) == 0.0);
  CHECK(cayperc::to_unit_interval(~0ULL) < 1.0);
  CHECK(cayperc::to_unit_interval(1ULL << 63) == 0.5);
}

TEST_CASE("label streams are independent functions of their keys") {
  const cayperc::LabelSource a(7, 0), b(7, 1), c(8, 0);
  const cayperc::LabelSource env(7, 0, cayperc::LabelStream::Environment);
  CHECK(a(3) == cayperc::LabelSource(7, 0)(3));
  CHECK(a(3) != b(3));
  CHECK(a(3) != c(3));
  CHECK(a(3) != env(3));
}

}
