#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "anchorstream/errors.hpp"

namespace anchorstream {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw PreconditionError("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Sample standard deviation with n-1 denominator.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw PreconditionError("sample_sd needs at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Percentile of an ascending-sorted sample with linear interpolation
/// between adjacent order statistics (the convention used by
/// numpy.percentile's default "linear" rule). p is a fraction in [0,1].
inline double percentile_of_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw PreconditionError("percentile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Convenience overload that sorts a copy.
inline double percentile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  return percentile_of_sorted(xs, p);
}

} // namespace anchorstream
