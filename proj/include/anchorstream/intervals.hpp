#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "anchorstream/estimators.hpp"
#include "anchorstream/tableau.hpp"

namespace anchorstream {

enum class IntervalMethod {
  Wald,
  JeffreysFpc,
  DirichletUnadjusted,
  DirichletAdjusted,
};

std::string_view to_string(IntervalMethod m);

/// An interval on the case-count scale. `floored` records whether the lower
/// limit was raised to the number of cases already observed (n_c); when it
/// is set, lower equals n_c exactly.
struct IntervalResult {
  double lower = 0.0;
  double upper = 0.0;
  IntervalMethod method = IntervalMethod::Wald;
  bool floored = false;
  int draws_used = 0; // 0 for analytic methods
};

/// Settings for posterior-draw-based intervals.
struct PosteriorConfig {
  int draws = 10000; // must be >= 100
  std::uint64_t seed = 0;
};

/// The variance scale factor of the adjusted credible interval is undefined
/// when the known-psi estimator has zero variance.
class ScaleUndefinedError : public PreconditionError {
public:
  explicit ScaleUndefinedError(const std::string& msg) : PreconditionError(msg) {}
};

/// Credible interval for the case count from stream 2 alone: Jeffreys
/// Beta(n+0.5, n-n+0.5) posterior quantiles, affinely rescaled so the
/// posterior variance shrinks by the FPC while the mean moves to the sample
/// proportion, then multiplied by n_tot. Analytic (no Monte Carlo error).
IntervalResult jeffreys_fpc_interval(const CellCounts& cells, const DesignContext& ctx,
                                     double level = 0.95, bool floor_at_cases = true);

/// Draws from the posterior of the known-psi case count (Dirichlet posterior
/// on the conditional cell probabilities, binomial redraw of the number
/// captured, each draw floored at n_c). Returned in draw order; identical
/// seed and inputs give an identical vector.
std::vector<double> dirichlet_posterior_draws(const CellCounts& cells,
                                              const DesignContext& ctx,
                                              const PosteriorConfig& cfg);

/// Equal-tail credible interval straight from the posterior draws.
IntervalResult dirichlet_unadjusted_interval(const CellCounts& cells,
                                             const DesignContext& ctx,
                                             const PosteriorConfig& cfg,
                                             double level = 0.95,
                                             bool floor_at_cases = true);

/// Scale-shift adjusted interval: draws are mapped onto the multinomial-MLE
/// scale, and the limits are then widened toward a Wald interval built on
/// the average of the random-sample and Chapman estimators.
IntervalResult dirichlet_adjusted_interval(const CellCounts& cells,
                                           const DesignContext& ctx,
                                           const PosteriorConfig& cfg,
                                           double level = 0.95,
                                           bool floor_at_cases = true);

/// The recommended interval: unadjusted below an estimated prevalence of
/// 0.2, adjusted at or above it.
IntervalResult select_credible_interval(const CellCounts& cells,
                                        const DesignContext& ctx,
                                        const PosteriorConfig& cfg,
                                        double level = 0.95,
                                        bool floor_at_cases = true);

/// n_hat +/- 1.96 se. The lower limit is raised to `floor_at` when given,
/// and clamped at zero otherwise.
IntervalResult wald_interval(const CountEstimate& est,
                             std::optional<double> floor_at = std::nullopt);

// The *_from_sorted variants let callers that already hold a sorted draw
// vector (e.g. the simulation lab) derive both credible intervals from one
// set of draws, exactly as the construction prescribes.
IntervalResult dirichlet_unadjusted_from_sorted(std::span<const double> sorted_draws,
                                                const CellCounts& cells,
                                                double level, bool floor_at_cases);
IntervalResult dirichlet_adjusted_from_sorted(std::span<const double> sorted_draws,
                                              const CellCounts& cells,
                                              const DesignContext& ctx,
                                              double level, bool floor_at_cases);

} // namespace anchorstream
