#pragma once

#include <cstdint>
#include <string_view>

#include "anchorstream/tableau.hpp"

namespace anchorstream {

enum class CountMethod {
  RandomSample, // stream 2 alone, FPC-corrected variance
  Chapman,      // classical bias-corrected two-stream capture-recapture
  KnownPsi,     // anchor-stream estimator using the known selection rate
  PsiStarMle,   // MLE under the full multinomial model given n_tot
};

std::string_view to_string(CountMethod m);

/// A case-count point estimate together with the inputs it consumed.
struct CountEstimate {
  CountMethod method;
  double n_hat = 0.0;
  double variance = 0.0;
  double se = 0.0;
  double prevalence_hat = 0.0; // n_hat / n_tot
  std::int64_t n11 = 0, n10 = 0, n01 = 0;
  double psi = 0.0;
};

/// Finite population correction n(N-n) / (N(n-1)), capped at 1.
/// Requires 2 <= n <= N. Zero when n == N (a census has no sampling noise).
double fpc_factor(std::int64_t sample_size, std::int64_t population_size);

/// Case count scaled up from the stream 2 random sample, with the
/// FPC-corrected binomial variance. Requires n_rs >= 2.
CountEstimate estimate_random_sample(const CellCounts& cells, const DesignContext& ctx);

/// Chapman's bias-corrected two-stream estimator. Defined for all
/// non-negative cells. Included as the classical benchmark; its variance
/// also feeds the adjusted credible interval.
CountEstimate estimate_chapman(const CellCounts& cells, const DesignContext& ctx);

/// n11 + n10 + n01/psi: cases missed by stream 1 scaled by the known
/// stream 2 selection rate. Requires psi > 0.
CountEstimate estimate_known_psi(const CellCounts& cells, const DesignContext& ctx);

/// The recommended estimator: MLE under the full multinomial model for the
/// seven cells given n_tot. Requires a non-empty stream-2-only cell.
/// Its variance harmonically combines the random-sample variance with the
/// Lincoln-Petersen variance (zero cells replaced by 0.5 there only).
CountEstimate estimate_psi_star_mle(const CellCounts& cells, const DesignContext& ctx);

/// Lincoln-Petersen variance used inside estimate_psi_star_mle, evaluated
/// after substituting 0.5 for any zero among (n11, n10, n01). Not a
/// user-facing estimator; exposed for verification.
double lincoln_petersen_variance(const CellCounts& cells);

/// Inputs for planning the stream 2 sampling rate.
struct PlanInputs {
  double prevalence = 0.0;   // assumed, in (0,1)
  double phi1 = 0.0;         // assumed share of cases stream 1 identifies, [0,1]
  std::int64_t n_tot = 0;
  double sigma_p = 0.0;      // desired SE of the prevalence estimate, > 0
};

/// Required stream 2 sampling rate for the desired precision, clamped to
/// [0,1]. Intended for low-prevalence settings (roughly p <= 0.2); above
/// that it tends to overestimate the required rate.
double plan_sampling_rate(const PlanInputs& in);

} // namespace anchorstream
