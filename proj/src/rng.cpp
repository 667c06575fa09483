#include "anchorstream/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace anchorstream {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
  std::uint64_t b = splitmix64(s);
  return b;
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
} // namespace

Rng::Rng(std::uint64_t seed) {
  // Standard recommendation: fill xoshiro state from splitmix64.
  std::uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be > 0");
  // Lemire multiply-shift with rejection of the biased low range.
  std::uint64_t x = next_u64();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (lo < threshold) {
      x = next_u64();
      m = static_cast<unsigned __int128>(x) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  have_spare_ = true;
  return u * f;
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    double u;
    do {
      u = next_double();
    } while (u == 0.0);
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d - d * v + d * std::log(v)) return d * v;
  }
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

std::int64_t Rng::binomial_inversion(std::int64_t n, double p) {
  // BINV: walk the pmf from 0. Expected cost O(n*p), callers keep that small.
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = static_cast<double>(n + 1) * s;
  double r = std::pow(q, static_cast<double>(n));
  double u = next_double();
  std::int64_t x = 0;
  while (u > r) {
    u -= r;
    ++x;
    if (x > n) { // numerical guard; restart with a fresh uniform
      x = 0;
      r = std::pow(q, static_cast<double>(n));
      u = next_double();
      continue;
    }
    r *= a / static_cast<double>(x) - s;
  }
  return x;
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p must be in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);

  std::int64_t count = 0;
  // Beta split: the k-th smallest of n uniforms is Beta(k, n+1-k); comparing
  // it to p tells us which side of the order statistic p falls on and the
  // problem recurses with roughly half of n.
  while (static_cast<double>(n) * p > 64.0) {
    const std::int64_t k = (n + 1) / 2;
    const double x = beta(static_cast<double>(k), static_cast<double>(n + 1 - k));
    if (x <= p) {
      count += k;
      n -= k;
      p = (p - x) / (1.0 - x);
    } else {
      n = k - 1;
      p = p / x;
    }
    if (p <= 0.0) return count;
    if (p >= 1.0) return count + n;
    if (p > 0.5) return count + n - binomial(n, 1.0 - p);
  }
  return count + binomial_inversion(n, p);
}

std::array<double, 3> Rng::dirichlet3(double a1, double a2, double a3) {
  const double g1 = gamma(a1);
  const double g2 = gamma(a2);
  const double g3 = gamma(a3);
  const double s = g1 + g2 + g3;
  return {g1 / s, g2 / s, g3 / s};
}

} // namespace anchorstream
