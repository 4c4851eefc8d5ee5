#include <doctest.h>

#include <cmath>

#include "cayperc/error.hpp"
#include "cayperc/walk.hpp"
#include "support.hpp"

using namespace cayperc;

namespace {

// Counts words of length `steps` over the family that multiply to the identity.
std::uint64_t closed_words(const GroupPresentation& pres, int steps, const Element& at) {
  if (steps == 0) return pres.is_identity(at) ? 1 : 0;
  std::uint64_t total = 0;
  for (const auto& s : pres.generators()) total += closed_words(pres, steps - 1, pres.multiply(at, s));
  return total;
}

double binomial_return(std::size_t n) {
  // C(2n, n) / 4^n
  double p = 1.0;
  for (std::size_t i = 1; i <= n; ++i) p *= static_cast<double>(n + i) / (4.0 * static_cast<double>(i));
  return p;
}

}  // namespace

TEST_SUITE("walk") {

TEST_CASE("first return probabilities") {
  WalkOptions exact;
  exact.arithmetic = Arithmetic::Exact;
  const auto z = return_probabilities(testing::z1(), 2, exact);
  CHECK(z.exact[0] == Rational(1, 2));
  const auto z2 = return_probabilities(testing::z2(), 2, exact);
  CHECK(z2.exact[0] == Rational(1, 4));
  const auto f2 = return_probabilities(testing::f2(), 4, exact);
  CHECK(f2.exact[0] == Rational(1, 4));
  CHECK(f2.exact[1] == Rational(7, 64));
}

TEST_CASE("exact series match word enumeration") {
  WalkOptions exact;
  exact.arithmetic = Arithmetic::Exact;
  for (const auto& pres : {testing::f2(), testing::z2(), lazify(testing::f2())}) {
    const auto series = return_probabilities(pres, 8, exact);
    for (int n = 1; n <= 4; ++n) {
      const auto words = closed_words(pres, 2 * n, pres.identity());
      BigInt total = 1;
      for (int i = 0; i < 2 * n; ++i) total *= static_cast<unsigned>(pres.family_size());
      CHECK(series.exact[static_cast<std::size_t>(n - 1)] == Rational(BigInt(words), total));
    }
  }
}

TEST_CASE("Z return probabilities follow the binomial law") {
  const auto series = return_probabilities(testing::z1(), 200);
  for (std::size_t n = 1; n <= 100; ++n) {
    CHECK(series.even[n - 1] == doctest::Approx(binomial_return(n)).epsilon(1e-10));
  }
  const auto z2 = return_probabilities(testing::z2(), 40);
  for (std::size_t n = 1; n <= 20; ++n) {
    CHECK(z2.even[n - 1] == doctest::Approx(binomial_return(n) * binomial_return(n)).epsilon(1e-10));
  }
}

TEST_CASE("radial chain and full-ball convolution agree") {
  for (const auto& pres : {testing::f2(), lazify(testing::f2()),
                           parse_presentation("family = free\nk = 2\ngenerators = ab BA a A")}) {
    WalkOptions full;
    full.allow_radial = false;
    const auto a = return_probabilities(pres, 16);
    const auto b = return_probabilities(pres, 16, full);
    REQUIRE(a.size() == b.size());
    CHECK_FALSE(b.radial);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.even[i] == doctest::Approx(b.even[i]).epsilon(1e-12));
    }
  }
  CHECK(return_probabilities(testing::f2(), 16).radial);
}

TEST_CASE("walk distributions are probability measures") {
  for (std::size_t steps : {1u, 4u, 7u}) {
    const auto dist = walk_distribution(testing::f2(), steps);
    double total = 0.0;
    for (const auto& [v, p] : dist.support) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("return probability roots increase and the series is supermultiplicative") {
  const auto series = return_probabilities(testing::f2(), 80);
  for (std::size_t n = 2; n <= series.size(); ++n) {
    const double prev = std::pow(series.even[n - 2], 1.0 / (2.0 * static_cast<double>(n - 1)));
    const double cur = std::pow(series.even[n - 1], 1.0 / (2.0 * static_cast<double>(n)));
    CHECK(cur >= prev);
  }
  for (std::size_t m = 1; m <= 20; ++m) {
    for (std::size_t n = 1; m + n <= series.size(); ++n) {
      CHECK(series.even[m + n - 1] >= series.even[m - 1] * series.even[n - 1] * (1 - 1e-12));
    }
  }
}

TEST_CASE("spectral radius estimates") {
  const auto f2 = spectral_radius(testing::f2(), 60);
  CHECK(f2.rho_hat == doctest::Approx(std::sqrt(3.0) / 2).epsilon(0.02));
  CHECK(f2.lower_bound <= f2.rho_hat);
  CHECK(f2.rho_hat <= f2.upper_bound);
  CHECK(f2.upper_bound <= 1.0);

  // Free group of rank 3: sqrt(2k - 1) / k.
  const auto f3 = spectral_radius(parse_presentation("family = free\nk = 3"), 200);
  CHECK(f3.rho_hat == doctest::Approx(std::sqrt(5.0) / 3).epsilon(0.01));

  const auto z = spectral_radius(testing::z1(), 400);
  CHECK(z.rho_hat >= 0.98);

  const auto lazy = spectral_radius(lazify(testing::f2()), 400);
  CHECK(lazy.rho_hat == doctest::Approx((1 + 4 * std::sqrt(3.0) / 2) / 5).epsilon(0.002));

  const auto raw = spectral_radius(testing::f2(), 60, SpectralMethod::RawRoot);
  CHECK(raw.rho_hat == raw.lower_bound);
  CHECK(raw.upper_bound == 1.0);

  CHECK_THROWS_AS(spectral_radius(testing::f2(), 2), Error);
}

TEST_CASE("walk preconditions") {
  const auto one_sided = parse_presentation("family = lattice\nd = 1\ngenerators = 1");
  CHECK_THROWS_AS(return_probabilities(one_sided, 10), Error);
  WalkOptions exact;
  exact.arithmetic = Arithmetic::Exact;
  CHECK_THROWS_AS(return_probabilities(testing::f2(), kExactStepCap + 2, exact), Error);
}

TEST_CASE("k-fold spectral law") {
  const auto two = kfold_spectral_check(testing::f2(), 2, 60);
  CHECK(two.rho_k_hat == doctest::Approx(0.75).epsilon(0.02));
  CHECK(two.pass);
  CHECK(std::abs(two.rho_k_hat - two.rho_hat_pow_k) <= 0.02);

  const auto one = kfold_spectral_check(testing::f2(), 1, 60);
  CHECK(one.rho_k_hat == doctest::Approx(one.rho_hat_pow_k));
  CHECK(one.pass);

  const auto z = kfold_spectral_check(testing::z1(), 3, 240);
  CHECK(z.rho_k_hat >= 0.95);
  CHECK(z.pass);
}

TEST_CASE("Mohar bound arithmetic") {
  CHECK(mohar_lower_bound(4, std::sqrt(3.0) / 2) == doctest::Approx(0.5359).epsilon(1e-3));
  CHECK(mohar_lower_bound(4, 1.0) == 0.0);
  CHECK(mohar_lower_bound(4, 0.5) == 2.0);
  CHECK_THROWS_AS(mohar_lower_bound(4, 1.5), Error);
}

}
