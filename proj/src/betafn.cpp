#include "anchorstream/betafn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anchorstream {

namespace {

// Continued fraction for I_x(a,b), valid (fast) for x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double inverse_incomplete_beta(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("inverse_incomplete_beta: a, b must be > 0");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("inverse_incomplete_beta: p must be in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  constexpr double kTol = 1e-10;
  const double log_b = log_beta(a, b);

  double lo = 0.0, hi = 1.0;
  double x = a / (a + b); // start at the mean
  for (int iter = 0; iter < 200; ++iter) {
    const double f = regularized_incomplete_beta(a, b, x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo < kTol * 0.01) break;
    // Newton step using the beta density; fall back to bisection when the
    // step leaves the bracket or the density is degenerate.
    const double log_pdf =
        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_b;
    double next;
    if (std::isfinite(log_pdf) && log_pdf > -700.0) {
      next = x - f / std::exp(log_pdf);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) < kTol * 0.01 && std::fabs(f) < 1e-14) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

} // namespace anchorstream
