#pragma once

// Simple random walk P f(g) = (1/d) sum_i f(g s_i): return probabilities,
// spectral radius estimates and the Mohar isoperimetric bound.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cayperc/cayley_ball.hpp"
#include "cayperc/group.hpp"

namespace cayperc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Arithmetic { Double, Exact };
enum class SpectralMethod { RawRoot, PolynomialFit };

const char* to_string(SpectralMethod method) noexcept;

inline constexpr std::size_t kExactStepCap = 30;

struct WalkOptions {
  Arithmetic arithmetic = Arithmetic::Double;
  std::size_t ball_cap = kDefaultBallCap;
  std::size_t step_cap = 20000;
  /// Use the word-length chain on free groups when the family is lumpable.
  bool allow_radial = true;
};

/// Law of the walk after `step` steps from the origin, over ball vertices.
struct WalkDistribution {
  std::size_t step = 0;
  std::size_t family_size = 0;
  std::vector<std::pair<std::uint32_t, double>> support;  // (vertex, probability), sorted
};

/// Full-ball convolution of the delta at the origin, `steps` times.
WalkDistribution walk_distribution(const GroupPresentation& pres, std::size_t steps,
                                   std::size_t ball_cap = kDefaultBallCap);

/// Return probabilities p_{2n}(e, e) for 2n <= n_max.
struct ReturnSeries {
  std::size_t family_size = 0;
  std::size_t n_max = 0;
  bool radial = false;             // computed on the free-group length chain
  std::vector<double> even;        // even[n - 1] = p_{2n}
  std::vector<Rational> exact;     // filled in Exact mode, same indexing

  std::size_t size() const noexcept { return even.size(); }
};

ReturnSeries return_probabilities(const GroupPresentation& pres, std::size_t n_max,
                                  const WalkOptions& options = {});

/// Word-length lumping of the walk on a free group. counts[m][delta + L]
/// is the number of family members taking a reduced word of length m to one
/// of length m + delta; lengths >= L share row L. Empty when the family is
/// not lumpable (the length process would not be Markov) or too large to
/// verify within `word_budget` multiplications.
struct RadialChain {
  std::size_t saturation = 0;  // L = longest generator
  std::vector<std::vector<std::uint64_t>> counts;
};

std::optional<RadialChain> radial_chain(const GroupPresentation& pres,
                                        std::size_t word_budget = 50'000'000);

struct SpectralEstimate {
  double rho_hat = 0.0;
  double lower_bound = 0.0;   // max_n p_{2n}^{1/(2n)}, a rigorous lower bound
  double upper_bound = 1.0;   // fit value plus fit margin, clamped to 1
  double fit_margin = 0.0;
  std::size_t n_max = 0;
  SpectralMethod method = SpectralMethod::PolynomialFit;
};

/// Fits log p_{2n} = 2n log(rho) - (3/2) log n + c over the upper half of the
/// available n (PolynomialFit), or reports the largest root (RawRoot).
SpectralEstimate spectral_radius(const ReturnSeries& series, SpectralMethod method);

SpectralEstimate spectral_radius(const GroupPresentation& pres, std::size_t n_max,
                                 SpectralMethod method = SpectralMethod::PolynomialFit,
                                 const WalkOptions& options = {});

struct KFoldCheck {
  SpectralEstimate base;
  SpectralEstimate kfold;
  int k = 1;
  double rho_k_hat = 0.0;       // estimate for S^[k]
  double rho_hat_pow_k = 0.0;   // base estimate to the k-th power
  double tolerance = 0.0;
  bool pass = false;            // rho_k_hat <= rho_hat^k + tolerance
};

KFoldCheck kfold_spectral_check(const GroupPresentation& pres, int k, std::size_t n_max,
                                double tolerance = 0.02,
                                SpectralMethod method = SpectralMethod::PolynomialFit);

/// d (1 - rho): lower bound on the edge-isoperimetric constant.
double mohar_lower_bound(std::size_t d, double rho_upper);

}  // namespace cayperc
