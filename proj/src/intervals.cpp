#include "anchorstream/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "anchorstream/betafn.hpp"
#include "anchorstream/rng.hpp"
#include "anchorstream/stats.hpp"

namespace anchorstream {

std::string_view to_string(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::Wald: return "wald";
    case IntervalMethod::JeffreysFpc: return "jeffreys_fpc";
    case IntervalMethod::DirichletUnadjusted: return "dirichlet_unadjusted";
    case IntervalMethod::DirichletAdjusted: return "dirichlet_adjusted";
  }
  return "unknown";
}

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw PreconditionError("confidence level must be in (0,1)");
}

IntervalResult apply_floor(IntervalResult r, bool enabled, double n_c) {
  if (enabled && r.lower < n_c) {
    r.lower = n_c;
    r.floored = true;
    if (r.upper < r.lower) r.upper = r.lower;
  }
  return r;
}

} // namespace

IntervalResult jeffreys_fpc_interval(const CellCounts& cells, const DesignContext& ctx,
                                     double level, bool floor_at_cases) {
  check_level(level);
  if (ctx.n_rs < 2)
    throw PreconditionError("Jeffreys-FPC interval needs n_rs >= 2");
  const double alpha = 1.0 - level;
  const double pos = static_cast<double>(cells.cases_stream2());
  const double n_rs = static_cast<double>(ctx.n_rs);
  const double shape_a = pos + 0.5;
  const double shape_b = n_rs - pos + 0.5;
  const double q_lo = inverse_incomplete_beta(shape_a, shape_b, alpha / 2.0);
  const double q_hi = inverse_incomplete_beta(shape_a, shape_b, 1.0 - alpha / 2.0);

  // Scale-shift so the posterior variance is multiplied by the FPC and the
  // mean lands on the sample proportion.
  const double p_hat = pos / n_rs;
  const double a = std::sqrt(fpc_factor(ctx.n_rs, ctx.n_tot));
  const double b = p_hat * (1.0 - a);
  const double n_tot = static_cast<double>(ctx.n_tot);

  IntervalResult r;
  r.method = IntervalMethod::JeffreysFpc;
  r.lower = n_tot * (a * q_lo + b);
  r.upper = n_tot * (a * q_hi + b);
  return apply_floor(r, floor_at_cases, static_cast<double>(cells.cases_observed()));
}

std::vector<double> dirichlet_posterior_draws(const CellCounts& cells,
                                              const DesignContext& ctx,
                                              const PosteriorConfig& cfg) {
  if (cfg.draws < 100)
    throw PreconditionError("posterior draws must be >= 100");
  const std::int64_t n_c = cells.cases_observed();
  if (n_c < 1)
    throw PreconditionError("credible interval needs at least one observed case");
  const double psi = ctx.psi;
  if (!(psi > 0.0 && psi <= 1.0))
    throw PreconditionError("psi must be in (0,1]");

  const double a1 = static_cast<double>(cells.n11()) + 0.5;
  const double a2 = static_cast<double>(cells.n10()) + 0.5;
  const double a3 = static_cast<double>(cells.n01()) + 0.5;
  const double n_c_d = static_cast<double>(n_c);

  Rng rng(cfg.seed);
  std::vector<double> draws(static_cast<std::size_t>(cfg.draws));
  for (auto& out : draws) {
    const auto p = rng.dirichlet3(a1, a2, a3);
    const double in_s1 = p[0] + p[1];
    const double p1 = psi * in_s1 / (psi * in_s1 + p[2]);
    const double p_caught = p1 * (1.0 - psi) + psi;
    // Posterior total given the number caught, then a fresh catch count to
    // reflect its uncertainty. round() is half-away-from-zero.
    const auto n_total = static_cast<std::int64_t>(std::round(n_c_d / p_caught));
    const double n_caught = static_cast<double>(rng.binomial(n_total, p_caught));
    const double value = n_caught * in_s1 + n_caught * p[2] / psi;
    out = std::max(value, n_c_d);
  }
  return draws;
}

IntervalResult dirichlet_unadjusted_from_sorted(std::span<const double> sorted_draws,
                                                const CellCounts& cells,
                                                double level, bool floor_at_cases) {
  check_level(level);
  const double alpha = 1.0 - level;
  IntervalResult r;
  r.method = IntervalMethod::DirichletUnadjusted;
  r.lower = percentile_of_sorted(sorted_draws, alpha / 2.0);
  r.upper = percentile_of_sorted(sorted_draws, 1.0 - alpha / 2.0);
  r.draws_used = static_cast<int>(sorted_draws.size());
  return apply_floor(r, floor_at_cases, static_cast<double>(cells.cases_observed()));
}

IntervalResult dirichlet_adjusted_from_sorted(std::span<const double> sorted_draws,
                                              const CellCounts& cells,
                                              const DesignContext& ctx,
                                              double level, bool floor_at_cases) {
  check_level(level);
  const auto star = estimate_psi_star_mle(cells, ctx);
  const auto known = estimate_known_psi(cells, ctx);
  if (known.variance == 0.0)
    throw ScaleUndefinedError(
        "adjusted interval: known-psi variance is zero, scale factor undefined");

  const double alpha = 1.0 - level;
  const double a = std::sqrt(star.variance / known.variance);
  const double b = star.n_hat * (1.0 - a);
  // a >= 0, so the affine map preserves order and commutes with the
  // interpolated percentiles; transforming the two limits equals
  // transforming every draw.
  const double ll_ab = a * percentile_of_sorted(sorted_draws, alpha / 2.0) + b;
  const double ul_ab = a * percentile_of_sorted(sorted_draws, 1.0 - alpha / 2.0) + b;

  const double var_rs = estimate_random_sample(cells, ctx).variance;
  const double var_chap = estimate_chapman(cells, ctx).variance;
  const double sigma_avg = std::sqrt((var_rs + var_chap) / 4.0);
  const double ll_avg = star.n_hat - 1.96 * sigma_avg;
  const double ul_avg = star.n_hat + 1.96 * sigma_avg;

  IntervalResult r;
  r.method = IntervalMethod::DirichletAdjusted;
  r.lower = std::min(ll_ab, 0.5 * (ll_ab + ll_avg));
  r.upper = std::max(ul_ab, 0.5 * (ul_ab + ul_avg));
  r.draws_used = static_cast<int>(sorted_draws.size());
  return apply_floor(r, floor_at_cases, static_cast<double>(cells.cases_observed()));
}

namespace {

std::vector<double> sorted_draws_for(const CellCounts& cells, const DesignContext& ctx,
                                     const PosteriorConfig& cfg) {
  auto draws = dirichlet_posterior_draws(cells, ctx, cfg);
  std::sort(draws.begin(), draws.end());
  return draws;
}

} // namespace

IntervalResult dirichlet_unadjusted_interval(const CellCounts& cells,
                                             const DesignContext& ctx,
                                             const PosteriorConfig& cfg,
                                             double level, bool floor_at_cases) {
  return dirichlet_unadjusted_from_sorted(sorted_draws_for(cells, ctx, cfg), cells,
                                          level, floor_at_cases);
}

IntervalResult dirichlet_adjusted_interval(const CellCounts& cells,
                                           const DesignContext& ctx,
                                           const PosteriorConfig& cfg,
                                           double level, bool floor_at_cases) {
  return dirichlet_adjusted_from_sorted(sorted_draws_for(cells, ctx, cfg), cells, ctx,
                                        level, floor_at_cases);
}

IntervalResult select_credible_interval(const CellCounts& cells,
                                        const DesignContext& ctx,
                                        const PosteriorConfig& cfg,
                                        double level, bool floor_at_cases) {
  const auto star = estimate_psi_star_mle(cells, ctx);
  if (star.prevalence_hat >= 0.2)
    return dirichlet_adjusted_interval(cells, ctx, cfg, level, floor_at_cases);
  return dirichlet_unadjusted_interval(cells, ctx, cfg, level, floor_at_cases);
}

IntervalResult wald_interval(const CountEstimate& est, std::optional<double> floor_at) {
  if (!std::isfinite(est.se))
    throw PreconditionError("Wald interval needs a finite standard error");
  IntervalResult r;
  r.method = IntervalMethod::Wald;
  r.lower = est.n_hat - 1.96 * est.se;
  r.upper = est.n_hat + 1.96 * est.se;
  if (floor_at) {
    return apply_floor(r, true, *floor_at);
  }
  if (r.lower < 0.0) r.lower = 0.0;
  return r;
}

} // namespace anchorstream
