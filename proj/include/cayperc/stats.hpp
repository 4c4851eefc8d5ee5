#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace cayperc {

/// Sample mean with the standard error of the mean.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Sums in index order, so the result does not depend on how the samples
/// were produced.
inline Estimate summarize(std::span<const double> xs) {
  Estimate out;
  out.samples = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  out.value = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (const double x : xs) ss += (x - out.value) * (x - out.value);
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace cayperc
