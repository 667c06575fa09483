#pragma once

#include <array>
#include <cstdint>

namespace anchorstream {

/// One step of the splitmix64 generator; also used as a 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent substream seed from (master seed, stream index).
/// Substreams are statistically independent streams of the same generator,
/// so replicated work can be farmed out to any number of workers while
/// staying bit-reproducible.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index);

/// xoshiro256++ generator with the sampling routines this project needs.
/// All methods are deterministic functions of the seed and call sequence;
/// no global state is touched.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

  /// Uniform integer in [0, bound); bound must be > 0. Unbiased
  /// (multiply-shift with rejection).
  std::uint64_t next_below(std::uint64_t bound);

  /// Standard normal variate (Marsaglia polar method, spare cached).
  double normal();

  /// Gamma(shape, scale 1). Marsaglia-Tsang squeeze for shape >= 1,
  /// boosted by U^(1/shape) for shape < 1.
  double gamma(double shape);

  /// Beta(a, b) via two gamma variates.
  double beta(double a, double b);

  /// Binomial(n, p). Inversion when the mean is small, otherwise a
  /// recursive beta split that cuts n geometrically, so large n stays cheap.
  std::int64_t binomial(std::int64_t n, double p);

  /// Dirichlet(a1, a2, a3) via three gammas normalized to sum 1.
  std::array<double, 3> dirichlet3(double a1, double a2, double a3);

private:
  std::array<std::uint64_t, 4> state_;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;

  std::int64_t binomial_inversion(std::int64_t n, double p);
};

} // namespace anchorstream
