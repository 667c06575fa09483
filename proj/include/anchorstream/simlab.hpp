#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anchorstream/rng.hpp"
#include "anchorstream/tableau.hpp"

namespace anchorstream {

/// Case-count study: populations with a fixed number of cases, a
/// symptom-driven voluntary stream, and a designed random sample.
struct Series1Config {
  std::int64_t n_tot = 500;
  double prevalence = 0.1;
  double psi = 0.2; // stream 2 sampling rate
  int reps = 10000;
  int posterior_draws = 10000;
  std::uint64_t seed = 0;
  int threads = 0; // 0 = hardware concurrency
  // Draw the case count as Binomial(n_tot, p) instead of fixing it at
  // round(p * n_tot). Sensitivity option; off reproduces the tables.
  bool binomial_case_count = false;
};

struct StratumParams {
  double mean = 0.0;
  double sd = 1.0;
};

/// Measurement distribution by (symptom, disease) stratum. Defaults are the
/// mixture used throughout the continuous-mean study.
struct Series2Strata {
  StratumParams symptomatic_case{10.0, 0.75};
  StratumParams asymptomatic_case{5.0, 0.5};
  StratumParams symptomatic_noncase{2.5, 1.2};
  StratumParams asymptomatic_noncase{1.0, 1.5};
};

struct Series2Config {
  Series1Config base;
  int bootstrap_replicates = 1000;
  Series2Strata strata;
};

/// One summary row per (estimator, interval) pair. Coverage and width are
/// averaged only over replicates whose interval was computable (ci_reps);
/// point statistics use reps_used. Fields without a defined value (e.g. the
/// naive stream 1 row has no interval) are NaN.
struct SimSummaryRow {
  std::string estimator;
  std::string interval;
  double mc_mean = 0.0;
  double mc_sd = 0.0;
  double avg_se = 0.0;
  double coverage = 0.0;
  double avg_width = 0.0;
  int reps_used = 0;
  int ci_reps = 0;
  int excluded = 0;
  std::uint64_t seed = 0;
};

/// Simulation rates: symptoms by disease status, stream 1 selection by
/// symptom status.
inline constexpr double kSymptomRateCase = 0.5;
inline constexpr double kSymptomRateNonCase = 0.1;
inline constexpr double kStream1RateSymptomatic = 0.9;
inline constexpr double kStream1RateAsymptomatic = 0.2;

/// Generates one population: round(p*n_tot) cases (or a binomial draw),
/// symptom-driven stream 1 membership, and a without-replacement stream 2
/// random sample of size round(psi*n_tot) from the full list. Case status
/// is present only on sampled records.
std::vector<IndividualRecord> generate_population(const Series1Config& cfg, Rng& rng);

/// Series 2 variant: also draws the measurement per (symptom, disease)
/// stratum, attached to sampled records only.
std::vector<IndividualRecord> generate_population(const Series2Config& cfg, Rng& rng);

/// Convenience overloads seeding a fresh generator from cfg.seed.
std::vector<IndividualRecord> generate_population(const Series1Config& cfg);
std::vector<IndividualRecord> generate_population(const Series2Config& cfg);

/// Runs the case-count study: three estimators, each with a Wald interval
/// and its designated credible interval. Replicates run in parallel on
/// per-replicate substreams; results are identical for any worker count.
std::vector<SimSummaryRow> run_series1(const Series1Config& cfg);

/// Runs the continuous-mean study: the twelve estimator rows (naive stream
/// means, stream 2 benchmarks, and the standardization estimators for the
/// overall, case, non-case, and difference targets).
std::vector<SimSummaryRow> run_series2(const Series2Config& cfg);

/// True parameter values implied by a Series 2 configuration.
struct Series2Truth {
  double overall = 0.0;
  double cases = 0.0;
  double noncases = 0.0;
  double difference = 0.0;
};

Series2Truth series2_truth(const Series2Config& cfg);

/// Renders summary rows as CSV (stable layout, full double precision, NaN
/// fields left empty). Byte-identical for identical rows.
std::string summary_csv(std::span<const SimSummaryRow> rows);

} // namespace anchorstream
