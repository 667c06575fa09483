#include "anchorstream/simlab.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "anchorstream/estimators.hpp"
#include "anchorstream/intervals.hpp"
#include "anchorstream/means.hpp"
#include "anchorstream/stats.hpp"

namespace anchorstream {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Rounds a configured count like prevalence*n_tot. Decimal inputs arrive as
// nearest doubles (0.05*250 computes to 12.500000000000001), so the product
// is first snapped to nine decimals; exact halves then round to even, which
// is what reproduces the published half-rate populations (12 cases, not 13).
std::int64_t round_count(double x) {
  const double snapped = std::nearbyint(x * 1e9) / 1e9;
  const double f = std::floor(snapped);
  const double frac = snapped - f;
  const auto base = static_cast<std::int64_t>(f);
  if (frac > 0.5) return base + 1;
  if (frac < 0.5) return base;
  return base % 2 == 0 ? base : base + 1;
}

void validate_base(const Series1Config& cfg) {
  if (cfg.n_tot < 2) throw PreconditionError("n_tot must be at least 2");
  if (!(cfg.prevalence > 0.0 && cfg.prevalence <= 1.0))
    throw PreconditionError("prevalence must be in (0,1]");
  if (!(cfg.psi > 0.0 && cfg.psi <= 1.0))
    throw PreconditionError("psi must be in (0,1]");
  if (round_count(cfg.prevalence * static_cast<double>(cfg.n_tot)) < 1)
    throw PreconditionError("round(prevalence*n_tot) must be >= 1");
  if (round_count(cfg.psi * static_cast<double>(cfg.n_tot)) < 2)
    throw PreconditionError("round(psi*n_tot) must be >= 2");
  if (cfg.reps < 1) throw PreconditionError("reps must be >= 1");
  if (cfg.posterior_draws < 100)
    throw PreconditionError("posterior draws must be >= 100");
}

void validate(const Series2Config& cfg) {
  validate_base(cfg.base);
  if (cfg.bootstrap_replicates < 2)
    throw PreconditionError("bootstrap replicates must be >= 2");
  for (const auto& s : {cfg.strata.symptomatic_case, cfg.strata.asymptomatic_case,
                        cfg.strata.symptomatic_noncase, cfg.strata.asymptomatic_noncase})
    if (!(s.sd > 0.0)) throw PreconditionError("stratum sd must be > 0");
}

int resolve_threads(int requested, int reps) {
  int t = requested;
  if (t <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    t = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return std::max(1, std::min(t, reps));
}

/// Runs fn(i) for i in [0, n) on `threads` workers. Work items are
/// independent; any exception is rethrown on the caller thread.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n || failed.load(std::memory_order_relaxed)) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct PopulationDraw {
  std::vector<IndividualRecord> records;
  std::int64_t true_cases = 0;
};

PopulationDraw draw_population(const Series1Config& cfg, Rng& rng,
                               const Series2Strata* strata) {
  const std::int64_t n_tot = cfg.n_tot;
  std::int64_t n_cases =
      cfg.binomial_case_count
          ? rng.binomial(n_tot, cfg.prevalence)
          : round_count(cfg.prevalence * static_cast<double>(n_tot));
  n_cases = std::clamp<std::int64_t>(n_cases, 0, n_tot);
  const auto n_rs =
      static_cast<std::size_t>(round_count(cfg.psi * static_cast<double>(n_tot)));

  // Stream 2: simple random sample without replacement from the full list.
  std::vector<std::uint32_t> order(static_cast<std::size_t>(n_tot));
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint8_t> in_stream2(static_cast<std::size_t>(n_tot), 0);
  for (std::size_t i = 0; i < n_rs; ++i) {
    const auto j = i + static_cast<std::size_t>(
                           rng.next_below(static_cast<std::uint64_t>(n_tot) - i));
    std::swap(order[i], order[j]);
    in_stream2[order[i]] = 1;
  }

  PopulationDraw out;
  out.true_cases = n_cases;
  out.records.resize(static_cast<std::size_t>(n_tot));
  for (std::int64_t i = 0; i < n_tot; ++i) {
    auto& rec = out.records[static_cast<std::size_t>(i)];
    rec.id = std::to_string(i + 1);
    const bool is_case = i < n_cases;
    const bool symptomatic =
        rng.next_double() < (is_case ? kSymptomRateCase : kSymptomRateNonCase);
    rec.in_stream1 = rng.next_double() < (symptomatic ? kStream1RateSymptomatic
                                                      : kStream1RateAsymptomatic);
    rec.in_stream2 = in_stream2[static_cast<std::size_t>(i)] != 0;
    if (rec.in_stream1 || rec.in_stream2) {
      rec.is_case = is_case;
      if (strata) {
        const StratumParams& s =
            is_case ? (symptomatic ? strata->symptomatic_case
                                   : strata->asymptomatic_case)
                    : (symptomatic ? strata->symptomatic_noncase
                                   : strata->asymptomatic_noncase);
        rec.x_value = s.mean + s.sd * rng.normal();
      }
    }
  }
  return out;
}

} // namespace

std::vector<IndividualRecord> generate_population(const Series1Config& cfg, Rng& rng) {
  validate_base(cfg);
  return draw_population(cfg, rng, nullptr).records;
}

std::vector<IndividualRecord> generate_population(const Series2Config& cfg, Rng& rng) {
  validate(cfg);
  return draw_population(cfg.base, rng, &cfg.strata).records;
}

std::vector<IndividualRecord> generate_population(const Series1Config& cfg) {
  Rng rng(cfg.seed);
  return generate_population(cfg, rng);
}

std::vector<IndividualRecord> generate_population(const Series2Config& cfg) {
  Rng rng(cfg.base.seed);
  return generate_population(cfg, rng);
}

Series2Truth series2_truth(const Series2Config& cfg) {
  Series2Truth t;
  t.cases = kSymptomRateCase * cfg.strata.symptomatic_case.mean +
            (1.0 - kSymptomRateCase) * cfg.strata.asymptomatic_case.mean;
  t.noncases = kSymptomRateNonCase * cfg.strata.symptomatic_noncase.mean +
               (1.0 - kSymptomRateNonCase) * cfg.strata.asymptomatic_noncase.mean;
  const double p_exact =
      static_cast<double>(round_count(cfg.base.prevalence *
                                      static_cast<double>(cfg.base.n_tot))) /
      static_cast<double>(cfg.base.n_tot);
  t.overall = p_exact * t.cases + (1.0 - p_exact) * t.noncases;
  t.difference = t.cases - t.noncases;
  return t;
}

// ---------------------------------------------------------------------------
// Series 1

namespace {

struct S1Replicate {
  double true_n = 0.0;
  std::optional<CountEstimate> rs, psi, star;
  std::optional<IntervalResult> rs_wald, rs_jeffreys;
  std::optional<IntervalResult> psi_wald, psi_credible;
  std::optional<IntervalResult> star_wald, star_credible;
};

S1Replicate run_s1_replicate(const Series1Config& cfg, std::uint64_t rep_index) {
  Rng rng(derive_stream_seed(cfg.seed, rep_index));
  const auto pop = draw_population(cfg, rng, nullptr);
  const auto [cells, ctx] = tabulate(pop.records, cfg.n_tot);
  const auto n_c = static_cast<double>(cells.cases_observed());

  S1Replicate rep;
  rep.true_n = static_cast<double>(pop.true_cases);

  rep.rs = estimate_random_sample(cells, ctx);
  rep.rs_wald = wald_interval(*rep.rs); // unfloored on purpose: stream-2-only benchmark
  rep.rs_jeffreys = jeffreys_fpc_interval(cells, ctx);

  rep.psi = estimate_known_psi(cells, ctx);
  rep.psi_wald = wald_interval(*rep.psi, n_c);

  try {
    rep.star = estimate_psi_star_mle(cells, ctx);
    rep.star_wald = wald_interval(*rep.star, n_c);
  } catch (const PreconditionError&) {
  }

  if (cells.cases_observed() >= 1) {
    PosteriorConfig pc;
    pc.draws = cfg.posterior_draws;
    pc.seed = rng.next_u64();
    auto draws = dirichlet_posterior_draws(cells, ctx, pc);
    std::sort(draws.begin(), draws.end());
    rep.psi_credible = dirichlet_unadjusted_from_sorted(draws, cells, 0.95, true);
    if (rep.star) {
      try {
        rep.star_credible =
            rep.star->prevalence_hat >= 0.2
                ? dirichlet_adjusted_from_sorted(draws, cells, ctx, 0.95, true)
                : *rep.psi_credible;
      } catch (const PreconditionError&) {
      }
    }
  }
  return rep;
}

struct RowAccumulator {
  std::string estimator, interval;
  std::vector<double> points, ses;
  long covered = 0;
  double width_sum = 0.0;
  int ci_reps = 0;

  void add_point(const std::optional<CountEstimate>& e) {
    if (!e) return;
    points.push_back(e->n_hat);
    ses.push_back(e->se);
  }
  void add_interval(const std::optional<IntervalResult>& iv, double truth) {
    if (!iv) return;
    ++ci_reps;
    if (iv->lower <= truth && truth <= iv->upper) ++covered;
    width_sum += iv->upper - iv->lower;
  }
  SimSummaryRow finish(int reps, std::uint64_t seed) const {
    SimSummaryRow row;
    row.estimator = estimator;
    row.interval = interval;
    row.reps_used = static_cast<int>(points.size());
    row.ci_reps = ci_reps;
    row.excluded = reps - row.reps_used;
    row.seed = seed;
    row.mc_mean = points.empty() ? kNaN : mean(points);
    row.mc_sd = points.size() < 2 ? kNaN : sample_sd(points);
    row.avg_se = ses.empty() ? kNaN : mean(ses);
    row.coverage = ci_reps == 0 ? kNaN
                                : static_cast<double>(covered) /
                                      static_cast<double>(ci_reps);
    row.avg_width = ci_reps == 0 ? kNaN : width_sum / static_cast<double>(ci_reps);
    return row;
  }
};

} // namespace

std::vector<SimSummaryRow> run_series1(const Series1Config& cfg) {
  validate_base(cfg);
  const int threads = resolve_threads(cfg.threads, cfg.reps);

  std::vector<S1Replicate> reps(static_cast<std::size_t>(cfg.reps));
  parallel_for(cfg.reps, threads, [&](int i) {
    reps[static_cast<std::size_t>(i)] =
        run_s1_replicate(cfg, static_cast<std::uint64_t>(i));
  });

  RowAccumulator acc[6];
  acc[0].estimator = "random_sample";
  acc[0].interval = "wald";
  acc[1].estimator = "random_sample";
  acc[1].interval = "jeffreys_fpc";
  acc[2].estimator = "known_psi";
  acc[2].interval = "wald";
  acc[3].estimator = "known_psi";
  acc[3].interval = "dirichlet_unadjusted";
  acc[4].estimator = "psi_star_mle";
  acc[4].interval = "wald";
  acc[5].estimator = "psi_star_mle";
  acc[5].interval = "dirichlet_selected";

  for (const auto& r : reps) {
    acc[0].add_point(r.rs);
    acc[1].add_point(r.rs);
    acc[2].add_point(r.psi);
    acc[3].add_point(r.psi);
    acc[4].add_point(r.star);
    acc[5].add_point(r.star);
    acc[0].add_interval(r.rs_wald, r.true_n);
    acc[1].add_interval(r.rs_jeffreys, r.true_n);
    acc[2].add_interval(r.psi_wald, r.true_n);
    acc[3].add_interval(r.psi_credible, r.true_n);
    acc[4].add_interval(r.star_wald, r.true_n);
    acc[5].add_interval(r.star_credible, r.true_n);
  }

  std::vector<SimSummaryRow> rows;
  rows.reserve(6);
  for (const auto& a : acc) rows.push_back(a.finish(cfg.reps, cfg.seed));
  return rows;
}

// ---------------------------------------------------------------------------
// Series 2

namespace {

// Indices of the twelve summary rows.
enum S2Row : int {
  kStream1Overall = 0,
  kStream2Overall,
  kAnchorOverall,
  kStream1Cases,
  kStream2Cases,
  kAnchorCases,
  kStream1NonCases,
  kStream2NonCases,
  kAnchorNonCases,
  kStream1Diff,
  kStream2Diff,
  kAnchorDiff,
  kS2RowCount,
};

struct S2Stat {
  std::optional<double> point;
  std::optional<double> se;
  std::optional<std::pair<double, double>> ci;
};

struct S2Replicate {
  std::array<S2Stat, kS2RowCount> stat;
};

struct GroupMean {
  double sum = 0.0;
  std::int64_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> value() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

// Benchmark stream/subgroup means of one (re)sample of the roster.
struct BenchmarkMeans {
  std::optional<double> s1_cases, s1_noncases, s2_cases, s2_noncases;
  std::optional<double> s1_diff, s2_diff;
};

template <typename IndexRange>
BenchmarkMeans benchmark_means(const CapturedRoster& ros, const IndexRange& idx) {
  GroupMean s1c, s1n, s2c, s2n;
  for (const auto i : idx) {
    const bool cs = ros.is_case[i] != 0;
    const double xv = ros.x[i];
    if (ros.s1[i]) (cs ? s1c : s1n).add(xv);
    if (ros.s2[i]) (cs ? s2c : s2n).add(xv);
  }
  BenchmarkMeans b;
  b.s1_cases = s1c.value();
  b.s1_noncases = s1n.value();
  b.s2_cases = s2c.value();
  b.s2_noncases = s2n.value();
  if (b.s1_cases && b.s1_noncases) b.s1_diff = *b.s1_cases - *b.s1_noncases;
  if (b.s2_cases && b.s2_noncases) b.s2_diff = *b.s2_cases - *b.s2_noncases;
  return b;
}

struct IndexIota {
  std::uint32_t n;
  struct iterator {
    std::uint32_t v;
    std::uint32_t operator*() const { return v; }
    iterator& operator++() {
      ++v;
      return *this;
    }
    bool operator!=(const iterator& o) const { return v != o.v; }
  };
  iterator begin() const { return {0}; }
  iterator end() const { return {n}; }
};

void summarize_series(std::vector<double>& series, S2Stat& stat) {
  if (series.size() < 2) return; // interval undefined for this replicate
  stat.se = sample_sd(series);
  std::sort(series.begin(), series.end());
  stat.ci = {percentile_of_sorted(series, 0.025),
             percentile_of_sorted(series, 0.975)};
}

S2Replicate run_s2_replicate(const Series2Config& cfg, std::uint64_t rep_index) {
  const auto& base = cfg.base;
  Rng rng(derive_stream_seed(base.seed, rep_index));
  const auto pop = draw_population(base, rng, &cfg.strata);
  const auto [cells, ctx] = tabulate(pop.records, base.n_tot);

  S2Replicate rep;
  const auto plan = BootstrapPlan::build(pop.records, ctx);
  const auto& ros = plan.roster;
  const auto m = static_cast<std::uint32_t>(ros.size());

  // Point estimates. Each is optional on its own terms.
  try {
    const auto sm = stream_means(pop.records, ctx);
    rep.stat[kStream1Overall].point = sm.stream1_mean;
    rep.stat[kStream2Overall].point = sm.stream2_mean;
    rep.stat[kStream2Overall].se = sm.stream2_se;
    rep.stat[kStream2Overall].ci = {sm.stream2_mean - 1.96 * sm.stream2_se,
                                    sm.stream2_mean + 1.96 * sm.stream2_se};
  } catch (const PreconditionError&) {
  }
  try {
    rep.stat[kAnchorOverall].point = mean_overall(pop.records, ctx);
  } catch (const PreconditionError&) {
  }
  try {
    rep.stat[kAnchorCases].point = mean_subgroup(pop.records, ctx, MeanTarget::Cases);
  } catch (const PreconditionError&) {
  }
  try {
    rep.stat[kAnchorNonCases].point =
        mean_subgroup(pop.records, ctx, MeanTarget::NonCases);
  } catch (const PreconditionError&) {
  }
  if (rep.stat[kAnchorCases].point && rep.stat[kAnchorNonCases].point)
    rep.stat[kAnchorDiff].point =
        *rep.stat[kAnchorCases].point - *rep.stat[kAnchorNonCases].point;

  const auto bench = benchmark_means(ros, IndexIota{m});
  rep.stat[kStream1Cases].point = bench.s1_cases;
  rep.stat[kStream2Cases].point = bench.s2_cases;
  rep.stat[kStream1NonCases].point = bench.s1_noncases;
  rep.stat[kStream2NonCases].point = bench.s2_noncases;
  rep.stat[kStream1Diff].point = bench.s1_diff;
  rep.stat[kStream2Diff].point = bench.s2_diff;

  // One bootstrap pass drives every percentile-interval row.
  const int B = cfg.bootstrap_replicates;
  std::vector<double> anchor_overall, anchor_cases, anchor_noncases, anchor_diff;
  std::vector<double> s1c, s1n, s1d, s2c, s2n, s2d;
  for (auto* v : {&anchor_overall, &anchor_cases, &anchor_noncases, &anchor_diff,
                  &s1c, &s1n, &s1d, &s2c, &s2n, &s2d})
    v->reserve(static_cast<std::size_t>(B));

  const std::uint64_t boot_seed = rng.next_u64();
  std::vector<std::uint32_t> idx(m);
  for (int b = 0; b < B; ++b) {
    Rng brng(derive_stream_seed(boot_seed, static_cast<std::uint64_t>(b)));
    for (auto& i : idx)
      i = static_cast<std::uint32_t>(brng.next_below(m));

    const auto anchor = anchor_replicate(plan, idx);
    if (anchor.overall) anchor_overall.push_back(*anchor.overall);
    if (anchor.cases) anchor_cases.push_back(*anchor.cases);
    if (anchor.noncases) anchor_noncases.push_back(*anchor.noncases);
    if (anchor.difference) anchor_diff.push_back(*anchor.difference);

    const auto bm = benchmark_means(ros, idx);
    if (bm.s1_cases) s1c.push_back(*bm.s1_cases);
    if (bm.s1_noncases) s1n.push_back(*bm.s1_noncases);
    if (bm.s1_diff) s1d.push_back(*bm.s1_diff);
    if (bm.s2_cases) s2c.push_back(*bm.s2_cases);
    if (bm.s2_noncases) s2n.push_back(*bm.s2_noncases);
    if (bm.s2_diff) s2d.push_back(*bm.s2_diff);
  }

  if (rep.stat[kAnchorOverall].point && plan.have_fpc)
    summarize_series(anchor_overall, rep.stat[kAnchorOverall]);
  if (rep.stat[kAnchorCases].point)
    summarize_series(anchor_cases, rep.stat[kAnchorCases]);
  if (rep.stat[kAnchorNonCases].point)
    summarize_series(anchor_noncases, rep.stat[kAnchorNonCases]);
  if (rep.stat[kAnchorDiff].point)
    summarize_series(anchor_diff, rep.stat[kAnchorDiff]);
  if (rep.stat[kStream1Cases].point) summarize_series(s1c, rep.stat[kStream1Cases]);
  if (rep.stat[kStream1NonCases].point)
    summarize_series(s1n, rep.stat[kStream1NonCases]);
  if (rep.stat[kStream1Diff].point) summarize_series(s1d, rep.stat[kStream1Diff]);
  if (rep.stat[kStream2Cases].point) summarize_series(s2c, rep.stat[kStream2Cases]);
  if (rep.stat[kStream2NonCases].point)
    summarize_series(s2n, rep.stat[kStream2NonCases]);
  if (rep.stat[kStream2Diff].point) summarize_series(s2d, rep.stat[kStream2Diff]);
  return rep;
}

} // namespace

std::vector<SimSummaryRow> run_series2(const Series2Config& cfg) {
  validate(cfg);
  const auto& base = cfg.base;
  const int threads = resolve_threads(base.threads, base.reps);
  const Series2Truth truth = series2_truth(cfg);

  std::vector<S2Replicate> reps(static_cast<std::size_t>(base.reps));
  parallel_for(base.reps, threads, [&](int i) {
    reps[static_cast<std::size_t>(i)] =
        run_s2_replicate(cfg, static_cast<std::uint64_t>(i));
  });

  struct RowSpec {
    const char* estimator;
    const char* interval;
    double truth;
  };
  const RowSpec specs[kS2RowCount] = {
      {"stream1_mean", "none", truth.overall},
      {"stream2_mean", "wald_fpc", truth.overall},
      {"anchor_overall", "bootstrap_fpc", truth.overall},
      {"stream1_cases", "bootstrap", truth.cases},
      {"stream2_cases", "bootstrap", truth.cases},
      {"anchor_cases", "bootstrap", truth.cases},
      {"stream1_noncases", "bootstrap", truth.noncases},
      {"stream2_noncases", "bootstrap", truth.noncases},
      {"anchor_noncases", "bootstrap", truth.noncases},
      {"stream1_diff", "bootstrap", truth.difference},
      {"stream2_diff", "bootstrap", truth.difference},
      {"anchor_diff", "bootstrap", truth.difference},
  };

  std::vector<SimSummaryRow> rows;
  rows.reserve(kS2RowCount);
  for (int r = 0; r < kS2RowCount; ++r) {
    std::vector<double> points, ses;
    long covered = 0;
    double width_sum = 0.0;
    int ci_reps = 0;
    for (const auto& rep : reps) {
      const auto& s = rep.stat[static_cast<std::size_t>(r)];
      if (s.point) points.push_back(*s.point);
      if (s.se) ses.push_back(*s.se);
      if (s.ci) {
        ++ci_reps;
        if (s.ci->first <= specs[r].truth && specs[r].truth <= s.ci->second)
          ++covered;
        width_sum += s.ci->second - s.ci->first;
      }
    }
    SimSummaryRow row;
    row.estimator = specs[r].estimator;
    row.interval = specs[r].interval;
    row.reps_used = static_cast<int>(points.size());
    row.ci_reps = ci_reps;
    row.excluded = base.reps - row.reps_used;
    row.seed = base.seed;
    row.mc_mean = points.empty() ? kNaN : mean(points);
    row.mc_sd = points.size() < 2 ? kNaN : sample_sd(points);
    row.avg_se = ses.empty() ? kNaN : mean(ses);
    row.coverage = ci_reps == 0 ? kNaN
                                : static_cast<double>(covered) /
                                      static_cast<double>(ci_reps);
    row.avg_width = ci_reps == 0 ? kNaN : width_sum / static_cast<double>(ci_reps);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string summary_csv(std::span<const SimSummaryRow> rows) {
  std::string out =
      "estimator,interval,mc_mean,mc_sd,avg_se,coverage,avg_width,"
      "reps_used,ci_reps,excluded,seed\n";
  char buf[64];
  const auto num = [&buf](double v) -> std::string {
    if (std::isnan(v)) return "";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (const auto& r : rows) {
    out += r.estimator;
    out += ',';
    out += r.interval;
    out += ',';
    out += num(r.mc_mean);
    out += ',';
    out += num(r.mc_sd);
    out += ',';
    out += num(r.avg_se);
    out += ',';
    out += num(r.coverage);
    out += ',';
    out += num(r.avg_width);
    out += ',';
    out += std::to_string(r.reps_used);
    out += ',';
    out += std::to_string(r.ci_reps);
    out += ',';
    out += std::to_string(r.excluded);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

} // namespace anchorstream
