// Command-line front end: case-count and mean estimation, sample-size
// planning, and the two simulation studies.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "anchorstream/estimators.hpp"
#include "anchorstream/intervals.hpp"
#include "anchorstream/means.hpp"
#include "anchorstream/recordio.hpp"
#include "anchorstream/report.hpp"
#include "anchorstream/simlab.hpp"
#include "anchorstream/tableau.hpp"
#include "anchorstream/version.hpp"

namespace as = anchorstream;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;        // bad input: CLI usage, file parsing, cells
constexpr int kExitPrecondition = 3; // estimator preconditions violated
constexpr int kExitInternal = 4;

as::OutputFormat parse_format(const std::string& s) {
  if (s == "json") return as::OutputFormat::Json;
  if (s == "csv") return as::OutputFormat::Csv;
  if (s == "table" || s == "text-table") return as::OutputFormat::Table;
  throw as::ParseError("unknown output format: " + s);
}

std::uint64_t ensure_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::cerr << "note: no --seed given; using generated seed " << s
            << " (pass --seed " << s << " to reproduce)\n";
  return s;
}

int threads_from_env(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ANCHORSTREAM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw as::ParseError("cannot open output file: " + out_path);
  out << text;
}

struct CellFlags {
  std::int64_t n1 = -1, n2 = -1, n3 = -1, n4 = -1, n5 = -1, n6 = -1, n7 = -1;
  bool any() const { return n1 >= 0 || n2 >= 0 || n3 >= 0 || n4 >= 0 ||
                            n5 >= 0 || n6 >= 0 || n7 >= 0; }
  bool all() const { return n1 >= 0 && n2 >= 0 && n3 >= 0 && n4 >= 0 &&
                            n5 >= 0 && n6 >= 0 && n7 >= 0; }
  as::CellCounts to_cells() const {
    if (!all())
      throw as::ParseError("inline cell input needs all of --n1 .. --n7");
    return as::CellCounts{n1, n2, n3, n4, n5, n6, n7};
  }
};

// ---------------------------------------------------------------------------

int run_estimate_count(const as::CellCounts& cells, std::uint64_t seed, int draws,
                       bool floor, const std::string& format,
                       const std::string& out_path) {
  const auto ctx = as::make_design_context(cells, cells.total());
  for (const auto& w : as::validate_design(cells, ctx))
    std::cerr << "warning: " << w.message << '\n';

  std::vector<as::CountReportRow> rows;
  const auto add_row = [&rows](const as::CountEstimate& est,
                               std::optional<as::IntervalResult> iv) {
    rows.push_back({est, std::move(iv)});
  };
  const auto try_interval = [](auto&& fn) -> std::optional<as::IntervalResult> {
    try {
      return fn();
    } catch (const as::PreconditionError& e) {
      std::cerr << "warning: interval skipped: " << e.what() << '\n';
      return std::nullopt;
    }
  };

  const double n_c = static_cast<double>(cells.cases_observed());
  const auto wald_floor =
      floor ? std::optional<double>(n_c) : std::optional<double>();

  int usable = 0;
  try {
    const auto rs = as::estimate_random_sample(cells, ctx);
    ++usable;
    // The stream-2-only Wald is deliberately left unfloored: it shows what
    // the random sample alone would support.
    add_row(rs, try_interval([&] { return as::wald_interval(rs); }));
    add_row(rs, try_interval([&] {
              return as::jeffreys_fpc_interval(cells, ctx, 0.95, floor);
            }));
  } catch (const as::PreconditionError& e) {
    std::cerr << "warning: random-sample estimator skipped: " << e.what() << '\n';
  }

  try {
    const auto chap = as::estimate_chapman(cells, ctx);
    ++usable;
    add_row(chap, try_interval([&] { return as::wald_interval(chap, wald_floor); }));
  } catch (const as::PreconditionError& e) {
    std::cerr << "warning: Chapman estimator skipped: " << e.what() << '\n';
  }

  // The two credible intervals share one posterior draw set.
  std::vector<double> sorted_draws;
  as::PosteriorConfig pc;
  pc.draws = draws;
  pc.seed = seed;
  if (cells.cases_observed() >= 1) {
    sorted_draws = as::dirichlet_posterior_draws(cells, ctx, pc);
    std::sort(sorted_draws.begin(), sorted_draws.end());
  } else {
    std::cerr << "warning: credible intervals skipped: no observed cases\n";
  }

  try {
    const auto psi = as::estimate_known_psi(cells, ctx);
    ++usable;
    add_row(psi, try_interval([&] { return as::wald_interval(psi, wald_floor); }));
    if (!sorted_draws.empty())
      add_row(psi, try_interval([&] {
                return as::dirichlet_unadjusted_from_sorted(sorted_draws, cells, 0.95,
                                                            floor);
              }));
  } catch (const as::PreconditionError& e) {
    std::cerr << "warning: known-psi estimator skipped: " << e.what() << '\n';
  }

  try {
    const auto star = as::estimate_psi_star_mle(cells, ctx);
    ++usable;
    add_row(star, try_interval([&] { return as::wald_interval(star, wald_floor); }));
    if (!sorted_draws.empty())
      add_row(star, try_interval([&] {
                return star.prevalence_hat >= 0.2
                           ? as::dirichlet_adjusted_from_sorted(sorted_draws, cells,
                                                                ctx, 0.95, floor)
                           : as::dirichlet_unadjusted_from_sorted(sorted_draws, cells,
                                                                  0.95, floor);
              }));
  } catch (const as::PreconditionError& e) {
    std::cerr << "warning: multinomial MLE estimator skipped: " << e.what() << '\n';
  }

  if (usable == 0)
    throw as::PreconditionError("no estimator was computable for this input");

  as::ReportMeta meta;
  meta.seed = seed;
  meta.posterior_draws = draws;
  meta.floor_enabled = floor;
  emit(as::render_count_report(rows, meta, parse_format(format)), out_path);
  return kExitOk;
}

int run_estimate_mean(const std::string& input, std::int64_t n_tot,
                      const std::string& target, int bootstrap_b, std::uint64_t seed,
                      const std::string& noncase_rule, const std::string& format,
                      const std::string& out_path) {
  const auto records = as::load_records(input);
  const auto tab = as::tabulate(records, n_tot);

  as::BootstrapConfig cfg;
  cfg.replicates = bootstrap_b;
  cfg.seed = seed;
  if (noncase_rule == "complement")
    cfg.noncase_rule = as::NonCaseTotalRule::ComplementOfCases;
  else if (noncase_rule != "mirrored")
    throw as::ParseError("--noncase-total must be 'mirrored' or 'complement'");

  const auto one = [&](as::MeanTarget t) {
    return as::bootstrap_mean(records, tab.ctx, t, cfg);
  };

  std::vector<as::MeanReportRow> rows;
  if (target == "all") {
    for (const auto t : {as::MeanTarget::Overall, as::MeanTarget::Cases,
                         as::MeanTarget::NonCases, as::MeanTarget::Difference}) {
      try {
        rows.push_back({one(t)});
      } catch (const as::PreconditionError& e) {
        std::cerr << "warning: target " << as::to_string(t)
                  << " skipped: " << e.what() << '\n';
      }
    }
    if (rows.empty())
      throw as::PreconditionError("no mean target was computable for this input");
  } else {
    as::MeanTarget t;
    if (target == "overall") t = as::MeanTarget::Overall;
    else if (target == "cases") t = as::MeanTarget::Cases;
    else if (target == "noncases") t = as::MeanTarget::NonCases;
    else if (target == "difference") t = as::MeanTarget::Difference;
    else throw as::ParseError("unknown target: " + target);
    rows.push_back({one(t)});
  }

  emit(as::render_mean_report(rows, seed, parse_format(format)), out_path);
  return kExitOk;
}

int run_plan(double prevalence, double phi1, std::int64_t n_tot, double sigma_p,
             const std::string& format, const std::string& out_path) {
  as::PlanInputs in;
  in.prevalence = prevalence;
  in.phi1 = phi1;
  in.n_tot = n_tot;
  in.sigma_p = sigma_p;
  const double psi = as::plan_sampling_rate(in);
  const auto n_rs = static_cast<std::int64_t>(
      std::ceil(psi * static_cast<double>(n_tot)));

  const char* note = "intended for low-prevalence settings (p <= 0.2)";
  if (prevalence > 0.2)
    std::cerr << "warning: the planning formula is " << note
              << " and tends to overestimate the required rate above that\n";

  if (parse_format(format) == as::OutputFormat::Json) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", psi);
    emit(std::string("{\n  \"psi\": ") + buf +
             ",\n  \"n_rs\": " + std::to_string(n_rs) + ",\n  \"note\": \"" + note +
             "\"\n}\n",
         out_path);
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "required stream 2 sampling rate psi = %.6g\n"
                  "implied sample size n_rs = %lld of %lld\n"
                  "note: %s\n",
                  psi, static_cast<long long>(n_rs), static_cast<long long>(n_tot),
                  note);
    emit(buf, out_path);
  }
  return kExitOk;
}

int write_simulation_outputs(const std::vector<as::SimSummaryRow>& rows,
                             const std::string& prefix, const std::string& command,
                             std::uint64_t seed, int threads, double wall_seconds) {
  const std::string csv_path = prefix + ".csv";
  const std::string json_path = prefix + ".json";
  const std::string manifest_path = prefix + ".manifest.json";
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw as::ParseError("cannot open output file: " + csv_path);
    out << as::summary_csv(rows);
  }
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw as::ParseError("cannot open output file: " + json_path);
    out << as::summary_json(rows);
  }
  as::RunManifest manifest;
  manifest.command = command;
  manifest.seed = seed;
  manifest.threads = threads;
  manifest.wall_seconds = wall_seconds;
  manifest.outputs = {csv_path, json_path};
  {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw as::ParseError("cannot open output file: " + manifest_path);
    out << as::render_manifest(manifest);
  }
  std::cout << "wrote " << csv_path << ", " << json_path << ", " << manifest_path
            << '\n';
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"anchor-stream estimation of case counts, prevalence, and means"};
  app.set_version_flag("--version", as::kVersion);
  app.require_subcommand(1);

  // --- estimate-count ------------------------------------------------------
  auto* count_cmd = app.add_subcommand(
      "estimate-count", "case-count and prevalence estimates from cell counts "
                        "or a records file");
  CellFlags cells_in;
  std::string count_input, count_format = "table", count_out;
  std::int64_t count_ntot = 0;
  std::optional<std::uint64_t> count_seed;
  int count_draws = 10000;
  bool count_no_floor = false;
  count_cmd->add_option("--n1", cells_in.n1, "both streams, negative");
  count_cmd->add_option("--n2", cells_in.n2, "both streams, positive");
  count_cmd->add_option("--n3", cells_in.n3, "stream 1 only, negative");
  count_cmd->add_option("--n4", cells_in.n4, "stream 1 only, positive");
  count_cmd->add_option("--n5", cells_in.n5, "stream 2 only, negative");
  count_cmd->add_option("--n6", cells_in.n6, "stream 2 only, positive");
  count_cmd->add_option("--n7", cells_in.n7, "sampled by neither stream");
  count_cmd->add_option("--input", count_input, "records file (.csv or .json)");
  count_cmd->add_option("--ntot", count_ntot,
                        "population size (required with --input)");
  count_cmd->add_option("--seed", count_seed, "RNG seed for posterior draws");
  count_cmd->add_option("--draws", count_draws, "posterior draws (default 10000)");
  count_cmd->add_flag("--no-floor", count_no_floor,
                      "do not raise interval lower limits to the observed case "
                      "count");
  count_cmd->add_option("--format", count_format, "json, csv, or table");
  count_cmd->add_option("--output", count_out, "write the report here");

  // --- estimate-mean -------------------------------------------------------
  auto* mean_cmd = app.add_subcommand(
      "estimate-mean", "standardized mean estimates with bootstrap intervals");
  std::string mean_input, mean_target = "all", mean_rule = "mirrored",
              mean_format = "table", mean_out;
  std::int64_t mean_ntot = 0;
  int mean_b = 1000;
  std::optional<std::uint64_t> mean_seed;
  mean_cmd->add_option("--input", mean_input, "records file (.csv or .json)")
      ->required();
  mean_cmd->add_option("--ntot", mean_ntot, "population size")->required();
  mean_cmd->add_option("--target", mean_target,
                       "overall, cases, noncases, difference, or all");
  mean_cmd->add_option("--bootstrap", mean_b, "bootstrap replicates (default 1000)");
  mean_cmd->add_option("--seed", mean_seed, "RNG seed for resampling");
  mean_cmd->add_option("--noncase-total", mean_rule,
                       "mirrored or complement (sensitivity option)");
  mean_cmd->add_option("--format", mean_format, "json, csv, or table");
  mean_cmd->add_option("--output", mean_out, "write the report here");

  // --- plan ----------------------------------------------------------------
  auto* plan_cmd =
      app.add_subcommand("plan", "required stream 2 sampling rate for a target "
                                 "precision");
  double plan_p = 0.0, plan_phi1 = 0.0, plan_sigma = 0.0;
  std::int64_t plan_ntot = 0;
  std::string plan_format = "table", plan_out;
  plan_cmd->add_option("--prev", plan_p, "assumed prevalence in (0,1)")->required();
  plan_cmd->add_option("--phi1", plan_phi1,
                       "assumed share of cases stream 1 identifies")
      ->required();
  plan_cmd->add_option("--ntot", plan_ntot, "population size")->required();
  plan_cmd->add_option("--sigma-p", plan_sigma, "desired prevalence SE")->required();
  plan_cmd->add_option("--format", plan_format, "json, csv, or table");
  plan_cmd->add_option("--output", plan_out, "write the report here");

  // --- simulate-series1 / simulate-series2 ---------------------------------
  auto* s1_cmd = app.add_subcommand("simulate-series1",
                                    "case-count simulation study");
  as::Series1Config s1;
  std::optional<std::uint64_t> s1_seed;
  std::string s1_prefix = "series1";
  s1_cmd->add_option("--ntot", s1.n_tot, "population size");
  s1_cmd->add_option("--prev", s1.prevalence, "true prevalence");
  s1_cmd->add_option("--psi", s1.psi, "stream 2 sampling rate");
  s1_cmd->add_option("--reps", s1.reps, "simulation replicates");
  s1_cmd->add_option("--draws", s1.posterior_draws, "posterior draws per replicate");
  s1_cmd->add_option("--seed", s1_seed, "master seed");
  s1_cmd->add_option("--threads", s1.threads,
                     "worker threads (0 = all cores; env ANCHORSTREAM_THREADS)");
  s1_cmd->add_flag("--binomial-cases", s1.binomial_case_count,
                   "draw the case count as Binomial(n_tot, p) instead of fixing "
                   "it (sensitivity)");
  s1_cmd->add_option("--out-prefix", s1_prefix, "output file prefix");

  auto* s2_cmd = app.add_subcommand("simulate-series2",
                                    "continuous-mean simulation study");
  as::Series2Config s2;
  std::optional<std::uint64_t> s2_seed;
  std::string s2_prefix = "series2";
  std::vector<double> s2_strata;
  s2_cmd->add_option("--ntot", s2.base.n_tot, "population size");
  s2_cmd->add_option("--prev", s2.base.prevalence, "true prevalence");
  s2_cmd->add_option("--psi", s2.base.psi, "stream 2 sampling rate");
  s2_cmd->add_option("--reps", s2.base.reps, "simulation replicates");
  s2_cmd->add_option("--bootstrap", s2.bootstrap_replicates,
                     "bootstrap replicates per simulation");
  s2_cmd->add_option("--draws", s2.base.posterior_draws,
                     "posterior draws per replicate");
  s2_cmd->add_option("--seed", s2_seed, "master seed");
  s2_cmd->add_option("--threads", s2.base.threads,
                     "worker threads (0 = all cores; env ANCHORSTREAM_THREADS)");
  s2_cmd->add_option("--strata", s2_strata,
                     "eight numbers: mean,sd for (symptomatic case), "
                     "(asymptomatic case), (symptomatic non-case), "
                     "(asymptomatic non-case)")
      ->expected(8);
  s2_cmd->add_option("--out-prefix", s2_prefix, "output file prefix");

  // --- reproduce-appendix-c ------------------------------------------------
  auto* repro_cmd = app.add_subcommand(
      "reproduce-appendix-c",
      "run the built-in worked example (500-person roster, 50-person random "
      "sample); serves as an installed smoke test");
  std::optional<std::uint64_t> repro_seed;
  int repro_draws = 10000;
  std::string repro_format = "table", repro_out;
  repro_cmd->add_option("--seed", repro_seed, "RNG seed (default 1)");
  repro_cmd->add_option("--draws", repro_draws, "posterior draws");
  repro_cmd->add_option("--format", repro_format, "json, csv, or table");
  repro_cmd->add_option("--output", repro_out, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (count_cmd->parsed()) {
      as::CellCounts cells;
      if (!count_input.empty()) {
        if (cells_in.any())
          throw as::ParseError("give either --input or inline cells, not both");
        if (count_ntot <= 0)
          throw as::ParseError("--ntot is required with --input");
        const auto records = as::load_records(count_input);
        cells = as::tabulate(records, count_ntot).cells;
      } else {
        cells = cells_in.to_cells();
      }
      return run_estimate_count(cells, ensure_seed(count_seed), count_draws,
                                !count_no_floor, count_format, count_out);
    }
    if (mean_cmd->parsed()) {
      return run_estimate_mean(mean_input, mean_ntot, mean_target, mean_b,
                               ensure_seed(mean_seed), mean_rule, mean_format,
                               mean_out);
    }
    if (plan_cmd->parsed()) {
      return run_plan(plan_p, plan_phi1, plan_ntot, plan_sigma, plan_format,
                      plan_out);
    }
    if (s1_cmd->parsed()) {
      s1.seed = ensure_seed(s1_seed);
      s1.threads = threads_from_env(s1.threads);
      const auto t0 = std::chrono::steady_clock::now();
      const auto rows = as::run_series1(s1);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      return write_simulation_outputs(rows, s1_prefix, "simulate-series1", s1.seed,
                                      s1.threads, secs);
    }
    if (s2_cmd->parsed()) {
      s2.base.seed = ensure_seed(s2_seed);
      s2.base.threads = threads_from_env(s2.base.threads);
      if (!s2_strata.empty()) {
        s2.strata.symptomatic_case = {s2_strata[0], s2_strata[1]};
        s2.strata.asymptomatic_case = {s2_strata[2], s2_strata[3]};
        s2.strata.symptomatic_noncase = {s2_strata[4], s2_strata[5]};
        s2.strata.asymptomatic_noncase = {s2_strata[6], s2_strata[7]};
      }
      const auto t0 = std::chrono::steady_clock::now();
      const auto rows = as::run_series2(s2);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      return write_simulation_outputs(rows, s2_prefix, "simulate-series2",
                                      s2.base.seed, s2.base.threads, secs);
    }
    if (repro_cmd->parsed()) {
      const as::CellCounts cells{6, 5, 100, 46, 33, 6, 304};
      return run_estimate_count(cells, repro_seed.value_or(1), repro_draws,
                                /*floor=*/true, repro_format, repro_out);
    }
  } catch (const as::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const as::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
