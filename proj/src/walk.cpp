#include "cayperc/walk.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cayperc/error.hpp"

namespace cayperc {

const char* to_string(SpectralMethod method) noexcept {
  return method == SpectralMethod::RawRoot ? "raw_root" : "polynomial_fit";
}

// ---------------------------------------------------------------------------
// Word-length lumping on free groups

namespace {

std::size_t reduced_product_length(std::span<const std::int64_t> g,
                                   std::span<const std::int64_t> s) noexcept {
  std::size_t cancel = 0;
  while (cancel < g.size() && cancel < s.size() && g[g.size() - 1 - cancel] == -s[cancel]) {
    ++cancel;
  }
  return g.size() + s.size() - 2 * cancel;
}

}  // namespace

std::optional<RadialChain> radial_chain(const GroupPresentation& pres, std::size_t word_budget) {
  if (pres.family() != GroupFamily::Free) return std::nullopt;
  const auto gens = pres.generators();
  std::size_t longest = 0;
  for (const auto& s : gens) longest = std::max(longest, s.size());

  const auto k = static_cast<std::int64_t>(pres.rank());
  std::size_t total_words = 1, layer = 1;
  for (std::size_t m = 1; m <= longest; ++m) {
    layer = m == 1 ? static_cast<std::size_t>(2 * k) : layer * static_cast<std::size_t>(2 * k - 1);
    total_words += layer;
    if (total_words * gens.size() > word_budget) return std::nullopt;
  }

  RadialChain chain;
  chain.saturation = longest;
  const std::size_t width = 2 * longest + 1;

  std::vector<Element> words{Element{}};
  for (std::size_t m = 0; m <= longest; ++m) {
    std::vector<std::uint64_t> reference;
    for (const auto& g : words) {
      std::vector<std::uint64_t> histogram(width, 0);
      for (const auto& s : gens) {
        const auto next = reduced_product_length(g, s);
        const auto delta = static_cast<std::int64_t>(next) - static_cast<std::int64_t>(m);
        ++histogram[static_cast<std::size_t>(delta + static_cast<std::int64_t>(longest))];
      }
      if (reference.empty()) {
        reference = std::move(histogram);
      } else if (histogram != reference) {
        return std::nullopt;
      }
    }
    chain.counts.push_back(std::move(reference));

    if (m == longest) break;
    std::vector<Element> longer;
    longer.reserve(words.size() * static_cast<std::size_t>(2 * k));
    for (const auto& g : words) {
      for (std::int64_t letter = -k; letter <= k; ++letter) {
        if (letter == 0 || (!g.empty() && g.back() == -letter)) continue;
        auto h = g;
        h.push_back(letter);
        longer.push_back(std::move(h));
      }
    }
    words = std::move(longer);
  }
  return chain;
}

namespace {

template <typename Scalar>
std::vector<Scalar> radial_returns(const RadialChain& chain, std::size_t n_max,
                                   const Scalar& step_weight) {
  const std::size_t L = chain.saturation;
  const std::size_t states = n_max * std::max<std::size_t>(L, 1) + 1;
  std::vector<Scalar> cur(states, Scalar(0)), next(states, Scalar(0));
  cur[0] = Scalar(1);
  std::vector<Scalar> returns;  // returns[t-1] = weight of length 0 at time t
  returns.reserve(n_max);
  std::size_t reach = 0;  // largest occupied length
  for (std::size_t t = 1; t <= n_max; ++t) {
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(std::min(states, reach + L + 1)),
              Scalar(0));
    for (std::size_t m = 0; m <= reach; ++m) {
      if (cur[m] == Scalar(0)) continue;
      const auto& row = chain.counts[std::min(m, L)];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 0) continue;
        const auto target = m + j - L;  // j >= L - m whenever row[j] > 0
        next[target] += cur[m] * Scalar(row[j]) * step_weight;
      }
    }
    reach = std::min(states - 1, reach + L);
    std::swap(cur, next);
    returns.push_back(cur[0]);
  }
  return returns;
}

template <typename Scalar>
std::vector<Scalar> ball_returns(const CayleyBall& ball, std::size_t half_steps,
                                 const Scalar& step_weight) {
  // p_{2t} = sum_g p_t(e, g)^2 for symmetric families.
  const auto arcs = ball.graph().edges();
  std::vector<Scalar> cur(ball.vertex_count(), Scalar(0)), next(ball.vertex_count(), Scalar(0));
  cur[0] = Scalar(1);
  std::vector<Scalar> out;
  out.reserve(half_steps);
  for (std::size_t t = 1; t <= half_steps; ++t) {
    std::fill(next.begin(), next.end(), Scalar(0));
    for (const auto& arc : arcs) {
      if (cur[arc.u] != Scalar(0)) next[arc.v] += cur[arc.u] * step_weight;
    }
    std::swap(cur, next);
    Scalar sum(0);
    for (const auto& x : cur) {
      if (x != Scalar(0)) sum += x * x;
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace

ReturnSeries return_probabilities(const GroupPresentation& pres, std::size_t n_max,
                                  const WalkOptions& options) {
  if (!pres.symmetric()) {
    fail(ErrorKind::Precondition, "return probabilities need a symmetric family (P = P*)");
  }
  if (n_max < 2) fail(ErrorKind::Precondition, "n_max must be at least 2");
  if (n_max > options.step_cap) {
    fail(ErrorKind::CapExceeded, fmt::format("n_max {} exceeds the step cap {}", n_max, options.step_cap));
  }
  const bool exact = options.arithmetic == Arithmetic::Exact;
  if (exact && n_max > kExactStepCap) {
    fail(ErrorKind::CapExceeded,
         fmt::format("exact arithmetic is limited to n_max <= {}", kExactStepCap));
  }

  ReturnSeries series;
  series.family_size = pres.family_size();
  series.n_max = n_max;
  const std::size_t half = n_max / 2;
  const BigInt d(pres.family_size());

  std::optional<RadialChain> chain;
  if (options.allow_radial) chain = radial_chain(pres);

  if (chain) {
    series.radial = true;
    if (exact) {
      const auto counts = radial_returns<BigInt>(*chain, 2 * half, BigInt(1));
      BigInt denominator = 1;
      for (std::size_t t = 1; t <= 2 * half; ++t) {
        denominator *= d;
        if (t % 2 == 0) series.exact.emplace_back(counts[t - 1], denominator);
      }
    } else {
      const auto probs =
          radial_returns<double>(*chain, 2 * half, 1.0 / static_cast<double>(pres.family_size()));
      for (std::size_t t = 2; t <= 2 * half; t += 2) series.even.push_back(probs[t - 1]);
    }
  } else {
    const auto ball = enumerate_ball(pres, half, BallMode::Family, options.ball_cap);
    if (exact) {
      const auto closed = ball_returns<BigInt>(ball, half, BigInt(1));
      BigInt denominator = 1;
      for (std::size_t t = 1; t <= half; ++t) {
        denominator *= d * d;
        series.exact.emplace_back(closed[t - 1], denominator);
      }
    } else {
      series.even =
          ball_returns<double>(ball, half, 1.0 / static_cast<double>(pres.family_size()));
    }
  }
  if (exact) {
    for (const auto& q : series.exact) series.even.push_back(static_cast<double>(q));
  }
  return series;
}

WalkDistribution walk_distribution(const GroupPresentation& pres, std::size_t steps,
                                   std::size_t ball_cap) {
  const auto ball = enumerate_ball(pres, steps, BallMode::Family, ball_cap);
  const double w = 1.0 / static_cast<double>(pres.family_size());
  std::vector<double> cur(ball.vertex_count(), 0.0), next(ball.vertex_count(), 0.0);
  cur[0] = 1.0;
  for (std::size_t t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& arc : ball.graph().edges()) next[arc.v] += cur[arc.u] * w;
    std::swap(cur, next);
  }
  WalkDistribution out;
  out.step = steps;
  out.family_size = pres.family_size();
  for (std::uint32_t v = 0; v < cur.size(); ++v) {
    if (cur[v] != 0.0) out.support.emplace_back(v, cur[v]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral radius

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

// rho from the slope of log p_{2n} + 1.5 log n against n.
double fit_rho(const std::vector<double>& n, const std::vector<double>& y, std::size_t first,
               std::size_t last) {
  const std::vector<double> xs(n.begin() + static_cast<std::ptrdiff_t>(first),
                               n.begin() + static_cast<std::ptrdiff_t>(last));
  const std::vector<double> ys(y.begin() + static_cast<std::ptrdiff_t>(first),
                               y.begin() + static_cast<std::ptrdiff_t>(last));
  return std::exp(least_squares(xs, ys).slope / 2.0);
}

}  // namespace

SpectralEstimate spectral_radius(const ReturnSeries& series, SpectralMethod method) {
  if (series.n_max < 4 || series.size() < 2) {
    fail(ErrorKind::Precondition, "spectral fit is underdetermined for n_max < 4");
  }
  SpectralEstimate est;
  est.n_max = series.n_max;
  est.method = method;

  for (std::size_t i = 0; i < series.size(); ++i) {
    const double p = series.even[i];
    if (p > 0.0) {
      est.lower_bound = std::max(est.lower_bound, std::pow(p, 1.0 / (2.0 * static_cast<double>(i + 1))));
    }
  }
  est.lower_bound = std::min(est.lower_bound, 1.0);

  if (method == SpectralMethod::RawRoot) {
    est.rho_hat = est.lower_bound;
    est.upper_bound = 1.0;
    est.fit_margin = 1.0 - est.lower_bound;
    return est;
  }

  std::vector<double> n, y;
  for (std::size_t i = series.size() / 2; i < series.size(); ++i) {
    const double p = series.even[i];
    if (!(p > 0.0)) continue;
    const double steps = static_cast<double>(i + 1);
    n.push_back(steps);
    y.push_back(std::log(p) + 1.5 * std::log(steps));
  }
  if (n.size() < 2) fail(ErrorKind::Precondition, "too few positive return probabilities to fit");

  const double rho_fit = fit_rho(n, y, 0, n.size());
  double margin = 1.0;
  if (n.size() >= 4) {
    const auto mid = n.size() / 2;
    margin = std::max(std::abs(fit_rho(n, y, 0, mid) - rho_fit),
                      std::abs(fit_rho(n, y, mid, n.size()) - rho_fit));
  }
  est.fit_margin = margin;
  est.rho_hat = std::clamp(rho_fit, est.lower_bound, 1.0);
  est.upper_bound = std::min(1.0, std::max(est.rho_hat, rho_fit + margin));
  return est;
}

SpectralEstimate spectral_radius(const GroupPresentation& pres, std::size_t n_max,
                                 SpectralMethod method, const WalkOptions& options) {
  if (n_max < 4) fail(ErrorKind::Precondition, "spectral fit is underdetermined for n_max < 4");
  return spectral_radius(return_probabilities(pres, n_max, options), method);
}

KFoldCheck kfold_spectral_check(const GroupPresentation& pres, int k, std::size_t n_max,
                                double tolerance, SpectralMethod method) {
  KFoldCheck check;
  check.k = k;
  check.tolerance = tolerance;
  check.base = spectral_radius(pres, n_max, method);
  check.kfold = spectral_radius(kfold_family(pres, k), n_max, method);
  check.rho_k_hat = check.kfold.rho_hat;
  check.rho_hat_pow_k = std::pow(check.base.rho_hat, k);
  check.pass = check.rho_k_hat <= check.rho_hat_pow_k + tolerance;
  return check;
}

double mohar_lower_bound(std::size_t d, double rho_upper) {
  if (!(rho_upper >= 0.0 && rho_upper <= 1.0)) {
    fail(ErrorKind::Precondition, "rho bound must lie in [0, 1]");
  }
  return static_cast<double>(d) * (1.0 - rho_upper);
}

}  // namespace cayperc
