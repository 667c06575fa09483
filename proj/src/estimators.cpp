#include "anchorstream/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace anchorstream {

std::string_view to_string(CountMethod m) {
  switch (m) {
    case CountMethod::RandomSample: return "random_sample";
    case CountMethod::Chapman: return "chapman";
    case CountMethod::KnownPsi: return "known_psi";
    case CountMethod::PsiStarMle: return "psi_star_mle";
  }
  return "unknown";
}

namespace {

CountEstimate base_estimate(CountMethod method, const CellCounts& cells,
                            const DesignContext& ctx) {
  CountEstimate e;
  e.method = method;
  e.n11 = cells.n11();
  e.n10 = cells.n10();
  e.n01 = cells.n01();
  e.psi = ctx.psi;
  return e;
}

void finish(CountEstimate& e, const DesignContext& ctx) {
  e.se = std::sqrt(e.variance);
  e.prevalence_hat = e.n_hat / static_cast<double>(ctx.n_tot);
}

} // namespace

double fpc_factor(std::int64_t sample_size, std::int64_t population_size) {
  if (sample_size < 2)
    throw PreconditionError("FPC undefined for sample size < 2");
  if (sample_size > population_size)
    throw PreconditionError("sample size exceeds population size");
  const double n = static_cast<double>(sample_size);
  const double N = static_cast<double>(population_size);
  return std::min(1.0, n * (N - n) / (N * (n - 1.0)));
}

CountEstimate estimate_random_sample(const CellCounts& cells, const DesignContext& ctx) {
  if (ctx.n_rs < 2)
    throw PreconditionError("random-sample estimator needs n_rs >= 2");
  auto e = base_estimate(CountMethod::RandomSample, cells, ctx);
  const double n_rs = static_cast<double>(ctx.n_rs);
  const double n_tot = static_cast<double>(ctx.n_tot);
  const double p_hat = static_cast<double>(cells.cases_stream2()) / n_rs;
  const double fpc = fpc_factor(ctx.n_rs, ctx.n_tot);
  e.n_hat = n_tot * p_hat;
  e.variance = n_tot * n_tot * fpc * p_hat * (1.0 - p_hat) / n_rs;
  finish(e, ctx);
  return e;
}

CountEstimate estimate_chapman(const CellCounts& cells, const DesignContext& ctx) {
  auto e = base_estimate(CountMethod::Chapman, cells, ctx);
  const double n11 = static_cast<double>(cells.n11());
  const double n10 = static_cast<double>(cells.n10());
  const double n01 = static_cast<double>(cells.n01());
  const double r1 = n11 + n10 + 1.0; // stream 1 cases + 1
  const double c1 = n11 + n01 + 1.0; // stream 2 cases + 1
  e.n_hat = r1 * c1 / (n11 + 1.0) - 1.0;
  e.variance = r1 * c1 * n10 * n01 / ((n11 + 1.0) * (n11 + 1.0) * (n11 + 2.0));
  finish(e, ctx);
  return e;
}

CountEstimate estimate_known_psi(const CellCounts& cells, const DesignContext& ctx) {
  if (!(ctx.psi > 0.0))
    throw PreconditionError("known-psi estimator needs psi > 0");
  auto e = base_estimate(CountMethod::KnownPsi, cells, ctx);
  const double n01 = static_cast<double>(cells.n01());
  e.n_hat = static_cast<double>(cells.n11() + cells.n10()) + n01 / ctx.psi;
  e.variance = n01 * (1.0 - ctx.psi) / (ctx.psi * ctx.psi);
  finish(e, ctx);
  return e;
}

double lincoln_petersen_variance(const CellCounts& cells) {
  // Zero cells are replaced by 0.5 here, and only here; the point estimate
  // uses the counts as observed.
  const auto soften = [](std::int64_t n) {
    return n > 0 ? static_cast<double>(n) : 0.5;
  };
  const double n11 = soften(cells.n11());
  const double n10 = soften(cells.n10());
  const double n01 = soften(cells.n01());
  return (n11 + n10) * (n11 + n01) * n10 * n01 / (n11 * n11 * n11);
}

CountEstimate estimate_psi_star_mle(const CellCounts& cells, const DesignContext& ctx) {
  const std::int64_t s2only = cells.n5 + cells.n6;
  if (s2only == 0)
    throw PreconditionError("multinomial MLE undefined: stream-2-only cell is empty");
  auto e = base_estimate(CountMethod::PsiStarMle, cells, ctx);
  const double ratio =
      static_cast<double>(cells.n5 + cells.n6 + cells.n7) / static_cast<double>(s2only);
  e.n_hat = static_cast<double>(cells.n2 + cells.n4) +
            static_cast<double>(cells.n6) * ratio;

  const double var_rs = estimate_random_sample(cells, ctx).variance;
  const double var_lp = lincoln_petersen_variance(cells);
  e.variance = (var_rs == 0.0 || var_lp == 0.0)
                   ? 0.0
                   : 1.0 / (1.0 / var_rs + 1.0 / var_lp);
  finish(e, ctx);
  return e;
}

double plan_sampling_rate(const PlanInputs& in) {
  if (!(in.prevalence > 0.0 && in.prevalence < 1.0))
    throw PreconditionError("assumed prevalence must be in (0,1)");
  if (!(in.phi1 >= 0.0 && in.phi1 <= 1.0))
    throw PreconditionError("phi1 must be in [0,1]");
  if (in.n_tot <= 0) throw PreconditionError("n_tot must be positive");
  if (!(in.sigma_p > 0.0)) throw PreconditionError("sigma_p must be > 0");
  const double num = in.prevalence * (1.0 - in.phi1);
  const double n_tot = static_cast<double>(in.n_tot);
  const double psi = num / (n_tot * n_tot * in.sigma_p * in.sigma_p + num);
  return std::clamp(psi, 0.0, 1.0);
}

} // namespace anchorstream
