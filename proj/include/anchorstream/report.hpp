#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anchorstream/estimators.hpp"
#include "anchorstream/intervals.hpp"
#include "anchorstream/means.hpp"
#include "anchorstream/simlab.hpp"

namespace anchorstream {

enum class OutputFormat { Json, Csv, Table };

/// One (estimator, interval) line of a case-count report.
struct CountReportRow {
  CountEstimate estimate;
  std::optional<IntervalResult> interval;
};

struct ReportMeta {
  std::uint64_t seed = 0;
  int posterior_draws = 0;
  bool floor_enabled = true;
};

std::string render_count_report(std::span<const CountReportRow> rows,
                                const ReportMeta& meta, OutputFormat format);

/// Mean-estimation report rows.
struct MeanReportRow {
  MeanEstimate estimate;
};

std::string render_mean_report(std::span<const MeanReportRow> rows,
                               std::uint64_t seed, OutputFormat format);

/// Simulation summary as JSON (CSV comes from summary_csv in simlab).
std::string summary_json(std::span<const SimSummaryRow> rows);

/// Run manifest written next to simulation outputs.
struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  int threads = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
};

std::string render_manifest(const RunManifest& m);

} // namespace anchorstream
