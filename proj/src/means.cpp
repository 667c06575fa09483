#include "anchorstream/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anchorstream/estimators.hpp"
#include "anchorstream/rng.hpp"
#include "anchorstream/stats.hpp"

namespace anchorstream {

std::string_view to_string(MeanTarget t) {
  switch (t) {
    case MeanTarget::Overall: return "overall";
    case MeanTarget::Cases: return "cases";
    case MeanTarget::NonCases: return "noncases";
    case MeanTarget::Difference: return "difference";
  }
  return "unknown";
}

namespace {

double require_x(const IndividualRecord& r) {
  if (!r.x_value)
    throw PreconditionError("record " + r.id + " contributes to the mean but has "
                            "no measurement");
  return *r.x_value;
}

bool require_case(const IndividualRecord& r) {
  if (!r.is_case)
    throw PreconditionError("record " + r.id + " was sampled but has no case status");
  return *r.is_case;
}

} // namespace

FpcTriple compute_fpc_triple(const CellCounts& cells) {
  const std::int64_t stream1 = cells.stream1_size();
  const std::int64_t both = cells.n1 + cells.n2;
  const std::int64_t s1only = cells.n3 + cells.n4;
  const std::int64_t s2only = cells.n5 + cells.n6;
  if (both < 2 || s1only < 2 || s2only < 2)
    throw PreconditionError("FPC triple needs at least 2 records per observed cell");
  FpcTriple f;
  f.fpc11 = fpc_factor(both, stream1);
  f.fpc10 = fpc_factor(s1only, stream1);
  f.fpc01 = fpc_factor(s2only, s2only + cells.n7);
  return f;
}

double mean_overall(std::span<const IndividualRecord> records, const DesignContext& ctx) {
  double sum1 = 0.0, sum01 = 0.0;
  std::int64_t c1 = 0, c01 = 0;
  for (const auto& r : records) {
    if (r.in_stream1) {
      sum1 += require_x(r);
      ++c1;
    } else if (r.in_stream2) {
      sum01 += require_x(r);
      ++c01;
    }
  }
  if (c01 == 0)
    throw PreconditionError("overall mean undefined: stream-2-only cell is empty");
  const double n_tot = static_cast<double>(ctx.n_tot);
  const double p1 = static_cast<double>(c1) / n_tot;
  const double term1 = c1 > 0 ? (sum1 / static_cast<double>(c1)) * p1 : 0.0;
  return term1 + (sum01 / static_cast<double>(c01)) * (1.0 - p1);
}

namespace {

struct SubgroupTally {
  double sum_s1 = 0.0, sum_01 = 0.0;
  std::int64_t in_s1 = 0, in_01 = 0;       // subgroup members by capture cell
  std::int64_t full_01 = 0;                // whole (0,1) cell, both statuses
};

SubgroupTally tally_subgroup(std::span<const IndividualRecord> records, bool want_case) {
  SubgroupTally t;
  for (const auto& r : records) {
    if (!r.sampled()) continue;
    const bool is_case = require_case(r);
    if (!r.in_stream1 && r.in_stream2) ++t.full_01;
    if (is_case != want_case) continue;
    if (r.in_stream1) {
      t.sum_s1 += require_x(r);
      ++t.in_s1;
    } else if (r.in_stream2) {
      t.sum_01 += require_x(r);
      ++t.in_01;
    }
  }
  return t;
}

std::int64_t count_sampled(std::span<const IndividualRecord> records) {
  std::int64_t n = 0;
  for (const auto& r : records)
    if (r.sampled()) ++n;
  return n;
}

} // namespace

double mean_subgroup(std::span<const IndividualRecord> records, const DesignContext& ctx,
                     MeanTarget subgroup, NonCaseTotalRule rule) {
  if (subgroup != MeanTarget::Cases && subgroup != MeanTarget::NonCases)
    throw PreconditionError("mean_subgroup expects Cases or NonCases");
  const bool want_case = subgroup == MeanTarget::Cases;
  const auto t = tally_subgroup(records, want_case);
  if (t.in_s1 == 0 || t.in_01 == 0)
    throw PreconditionError("subgroup mean undefined: no " +
                            std::string(to_string(subgroup)) +
                            (t.in_s1 == 0 ? " in stream 1" : " in the stream-2-only cell"));

  const std::int64_t n7 = ctx.n_tot - count_sampled(records);
  // Shared stream-2-only expansion ratio; subgroup counts fill the
  // numerator cells.
  const double ratio =
      static_cast<double>(t.full_01 + n7) / static_cast<double>(t.full_01);
  double total;
  if (want_case || rule == NonCaseTotalRule::MirroredRatio) {
    total = static_cast<double>(t.in_s1) + static_cast<double>(t.in_01) * ratio;
  } else {
    // Complement rule: n_tot minus the estimated case total.
    const auto tc = tally_subgroup(records, true);
    total = static_cast<double>(ctx.n_tot) -
            (static_cast<double>(tc.in_s1) + static_cast<double>(tc.in_01) * ratio);
  }

  const double p1 = static_cast<double>(t.in_s1) / total;
  return (t.sum_s1 / static_cast<double>(t.in_s1)) * p1 +
         (t.sum_01 / static_cast<double>(t.in_01)) * (1.0 - p1);
}

double mean_difference(std::span<const IndividualRecord> records, const DesignContext& ctx,
                       NonCaseTotalRule rule) {
  return mean_subgroup(records, ctx, MeanTarget::Cases, rule) -
         mean_subgroup(records, ctx, MeanTarget::NonCases, rule);
}

StreamMeans stream_means(std::span<const IndividualRecord> records, const DesignContext& ctx) {
  double sum1 = 0.0;
  std::int64_t c1 = 0;
  std::vector<double> x2;
  for (const auto& r : records) {
    if (r.in_stream1) {
      sum1 += require_x(r);
      ++c1;
    }
    if (r.in_stream2) x2.push_back(require_x(r));
  }
  if (c1 == 0) throw PreconditionError("stream 1 is empty");
  if (x2.size() < 2) throw PreconditionError("stream 2 needs at least 2 records");
  StreamMeans m;
  m.stream1_mean = sum1 / static_cast<double>(c1);
  m.stream2_mean = mean(x2);
  const double fpc = fpc_factor(static_cast<std::int64_t>(x2.size()), ctx.n_tot);
  m.stream2_se = std::sqrt(fpc) * sample_sd(x2) / std::sqrt(static_cast<double>(x2.size()));
  return m;
}

// ---------------------------------------------------------------------------

CapturedRoster CapturedRoster::build(std::span<const IndividualRecord> records,
                                     const DesignContext& ctx) {
  CapturedRoster r;
  r.n_tot = ctx.n_tot;
  std::int64_t captured = 0;
  for (const auto& rec : records) {
    if (!rec.sampled()) continue;
    ++captured;
    r.s1.push_back(rec.in_stream1 ? 1 : 0);
    r.s2.push_back(rec.in_stream2 ? 1 : 0);
    r.is_case.push_back(require_case(rec) ? 1 : 0);
    r.x.push_back(rec.x_value ? *rec.x_value
                              : std::numeric_limits<double>::quiet_NaN());
  }
  r.n7 = ctx.n_tot - captured;
  if (r.n7 < 0) throw PreconditionError("captured records exceed n_tot");
  return r;
}

BootstrapPlan BootstrapPlan::build(std::span<const IndividualRecord> records,
                                   const DesignContext& ctx, NonCaseTotalRule rule) {
  BootstrapPlan plan;
  plan.roster = CapturedRoster::build(records, ctx);
  plan.noncase_rule = rule;

  const auto& ros = plan.roster;
  CellCounts cells;
  double sum11 = 0.0, sum10 = 0.0, sum01 = 0.0;
  bool x_complete = true;
  for (std::size_t i = 0; i < ros.size(); ++i) {
    const bool cs = ros.is_case[i] != 0;
    if (std::isnan(ros.x[i])) x_complete = false;
    if (ros.s1[i] && ros.s2[i]) {
      (cs ? cells.n2 : cells.n1)++;
      sum11 += ros.x[i];
    } else if (ros.s1[i]) {
      (cs ? cells.n4 : cells.n3)++;
      sum10 += ros.x[i];
    } else {
      (cs ? cells.n6 : cells.n5)++;
      sum01 += ros.x[i];
    }
  }
  cells.n7 = ros.n7;
  plan.n_c_cases = cells.cases_observed();
  plan.n_c_noncases = cells.n1 + cells.n3 + cells.n5;

  if (x_complete) {
    try {
      const FpcTriple f = compute_fpc_triple(cells);
      plan.a11 = std::sqrt(f.fpc11);
      plan.a10 = std::sqrt(f.fpc10);
      plan.a01 = std::sqrt(f.fpc01);
      plan.b11 = (sum11 / static_cast<double>(cells.n1 + cells.n2)) * (1.0 - plan.a11);
      plan.b10 = (sum10 / static_cast<double>(cells.n3 + cells.n4)) * (1.0 - plan.a10);
      plan.b01 = (sum01 / static_cast<double>(cells.n5 + cells.n6)) * (1.0 - plan.a01);
      plan.have_fpc = true;
    } catch (const PreconditionError&) {
      plan.have_fpc = false;
    }
  }
  return plan;
}

AnchorReplicate anchor_replicate(const BootstrapPlan& plan,
                                 std::span<const std::uint32_t> idx) {
  const auto& ros = plan.roster;
  // Cell tallies of the resample, split by case status, plus the x sums
  // needed by each estimator.
  std::int64_t c11 = 0, c10 = 0, c01 = 0;
  std::int64_t case_s1 = 0, case_01 = 0, nonc_s1 = 0, nonc_01 = 0;
  double sx11 = 0.0, sx10 = 0.0, sx01 = 0.0;
  double sx_case_s1 = 0.0, sx_case_01 = 0.0, sx_nonc_s1 = 0.0, sx_nonc_01 = 0.0;

  for (const std::uint32_t i : idx) {
    const bool cs = ros.is_case[i] != 0;
    const double xv = ros.x[i];
    if (ros.s1[i]) {
      if (ros.s2[i]) {
        ++c11;
        sx11 += xv;
      } else {
        ++c10;
        sx10 += xv;
      }
      (cs ? case_s1 : nonc_s1)++;
      (cs ? sx_case_s1 : sx_nonc_s1) += xv;
    } else {
      ++c01;
      sx01 += xv;
      (cs ? case_01 : nonc_01)++;
      (cs ? sx_case_01 : sx_nonc_01) += xv;
    }
  }

  AnchorReplicate out;
  const double n_tot = static_cast<double>(ros.n_tot);

  if (c01 > 0 && plan.have_fpc) {
    const double p11 = static_cast<double>(c11) / n_tot;
    const double p10 = static_cast<double>(c10) / n_tot;
    const double p1dot = p11 + p10;
    const double t11 =
        c11 > 0 ? (plan.a11 * (sx11 / static_cast<double>(c11)) + plan.b11) * p11 : 0.0;
    const double t10 =
        c10 > 0 ? (plan.a10 * (sx10 / static_cast<double>(c10)) + plan.b10) * p10 : 0.0;
    const double x01s = plan.a01 * (sx01 / static_cast<double>(c01)) + plan.b01;
    out.overall = t11 + t10 + x01s * (1.0 - p1dot);
  }

  if (c01 > 0) {
    const double ratio =
        static_cast<double>(c01 + ros.n7) / static_cast<double>(c01);
    const auto subgroup_value = [&](std::int64_t in_s1, std::int64_t in_01,
                                    double sum_s1, double sum_01,
                                    double total_raw,
                                    std::int64_t floor_at) -> std::optional<double> {
      if (in_01 == 0) return std::nullopt; // the replicate is not used
      const double total = std::max(total_raw, static_cast<double>(floor_at));
      const double p1 = static_cast<double>(in_s1) / total;
      const double t1 =
          in_s1 > 0 ? (sum_s1 / static_cast<double>(in_s1)) * p1 : 0.0;
      return t1 + (sum_01 / static_cast<double>(in_01)) * (1.0 - p1);
    };

    const double case_total_raw =
        static_cast<double>(case_s1) + static_cast<double>(case_01) * ratio;
    out.cases = subgroup_value(case_s1, case_01, sx_case_s1, sx_case_01,
                               case_total_raw, plan.n_c_cases);

    const double nonc_total_raw =
        plan.noncase_rule == NonCaseTotalRule::MirroredRatio
            ? static_cast<double>(nonc_s1) + static_cast<double>(nonc_01) * ratio
            : n_tot - case_total_raw;
    out.noncases = subgroup_value(nonc_s1, nonc_01, sx_nonc_s1, sx_nonc_01,
                                  nonc_total_raw, plan.n_c_noncases);
  }

  if (out.cases && out.noncases) out.difference = *out.cases - *out.noncases;
  return out;
}

MeanEstimate bootstrap_mean(std::span<const IndividualRecord> records,
                            const DesignContext& ctx, MeanTarget target,
                            const BootstrapConfig& cfg) {
  if (cfg.replicates < 2)
    throw PreconditionError("bootstrap needs at least 2 replicates");

  MeanEstimate est;
  est.target = target;
  est.b_requested = cfg.replicates;
  switch (target) {
    case MeanTarget::Overall: est.mu_hat = mean_overall(records, ctx); break;
    case MeanTarget::Cases:
      est.mu_hat = mean_subgroup(records, ctx, MeanTarget::Cases, cfg.noncase_rule);
      break;
    case MeanTarget::NonCases:
      est.mu_hat = mean_subgroup(records, ctx, MeanTarget::NonCases, cfg.noncase_rule);
      break;
    case MeanTarget::Difference:
      est.mu_hat = mean_difference(records, ctx, cfg.noncase_rule);
      break;
  }

  const auto plan = BootstrapPlan::build(records, ctx, cfg.noncase_rule);
  if (target == MeanTarget::Overall && !plan.have_fpc)
    throw PreconditionError("overall-mean bootstrap needs the FPC triple; "
                            "some observed cell has fewer than 2 records");

  const std::size_t m = plan.roster.size();
  if (m == 0) throw PreconditionError("no captured records to resample");

  std::vector<double> reps;
  reps.reserve(static_cast<std::size_t>(cfg.replicates));
  std::vector<std::uint32_t> idx(m);
  for (int b = 0; b < cfg.replicates; ++b) {
    Rng rng(derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(b)));
    for (auto& i : idx)
      i = static_cast<std::uint32_t>(rng.next_below(m));
    const auto rep = anchor_replicate(plan, idx);
    const std::optional<double> v = target == MeanTarget::Overall    ? rep.overall
                                    : target == MeanTarget::Cases    ? rep.cases
                                    : target == MeanTarget::NonCases ? rep.noncases
                                                                     : rep.difference;
    if (v) reps.push_back(*v);
  }

  est.b_used = static_cast<int>(reps.size());
  if (est.b_used < 2)
    throw PreconditionError("fewer than 2 usable bootstrap replicates");
  if (est.b_used < static_cast<int>(0.9 * cfg.replicates))
    est.warnings.push_back("only " + std::to_string(est.b_used) + " of " +
                           std::to_string(cfg.replicates) +
                           " bootstrap replicates were usable");
  est.se = sample_sd(reps);
  std::sort(reps.begin(), reps.end());
  est.lower = percentile_of_sorted(reps, 0.025);
  est.upper = percentile_of_sorted(reps, 0.975);
  return est;
}

} // namespace anchorstream
