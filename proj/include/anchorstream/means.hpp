#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anchorstream/tableau.hpp"

namespace anchorstream {

enum class MeanTarget { Overall, Cases, NonCases, Difference };

std::string_view to_string(MeanTarget t);

/// How the non-case population total is estimated for the subgroup mean.
/// The mirrored form puts non-case counts in the numerator cells of the
/// multinomial MLE; the complement form subtracts the case total from n_tot.
/// The two are algebraically identical; both are kept for sensitivity runs.
enum class NonCaseTotalRule { MirroredRatio, ComplementOfCases };

struct BootstrapConfig {
  int replicates = 1000;
  std::uint64_t seed = 0;
  NonCaseTotalRule noncase_rule = NonCaseTotalRule::MirroredRatio;
};

/// Point estimate with bootstrap spread. The percentile interval need not
/// contain mu_hat in pathological resamples; that is expected.
struct MeanEstimate {
  MeanTarget target = MeanTarget::Overall;
  double mu_hat = 0.0;
  double se = 0.0;    // SD of the usable bootstrap replicates
  double lower = 0.0; // 2.5th replicate percentile
  double upper = 0.0; // 97.5th replicate percentile
  int b_used = 0;
  int b_requested = 0;
  std::vector<std::string> warnings;
};

/// Finite population corrections for the three observed capture cells.
/// Cells (1,1) and (1,0) are samples from the stream 1 roster; cell (0,1)
/// samples everyone stream 1 missed. Each factor is capped at 1 and needs
/// a cell sample size of at least 2.
struct FpcTriple {
  double fpc11 = 1.0, fpc10 = 1.0, fpc01 = 1.0;
};

FpcTriple compute_fpc_triple(const CellCounts& cells);

/// Standardization over stream 1 capture status: the stream 1 sample mean
/// weighted by the observed stream 1 share, plus the stream-2-only sample
/// mean weighted by the remainder. With a binary measurement this equals
/// the multinomial-MLE prevalence estimate.
double mean_overall(std::span<const IndividualRecord> records, const DesignContext& ctx);

/// Subgroup (cases or non-cases) version: weights use the estimated
/// subgroup total in place of n_tot. `subgroup` must be Cases or NonCases.
double mean_subgroup(std::span<const IndividualRecord> records, const DesignContext& ctx,
                     MeanTarget subgroup,
                     NonCaseTotalRule rule = NonCaseTotalRule::MirroredRatio);

/// Case minus non-case subgroup means.
double mean_difference(std::span<const IndividualRecord> records, const DesignContext& ctx,
                       NonCaseTotalRule rule = NonCaseTotalRule::MirroredRatio);

/// Benchmark stream means: the (biased) naive stream 1 mean, and the stream 2
/// mean with its FPC-adjusted standard error.
struct StreamMeans {
  double stream1_mean = 0.0;
  double stream2_mean = 0.0;
  double stream2_se = 0.0;
};

StreamMeans stream_means(std::span<const IndividualRecord> records, const DesignContext& ctx);

/// Percentile bootstrap for the requested target. Resamples the captured
/// records with replacement (n7 stays fixed); replicates whose stream-2-only
/// subgroup cell comes up empty are skipped. The Overall target applies the
/// FPC scale-shift to each cell mean, with constants from the original data.
MeanEstimate bootstrap_mean(std::span<const IndividualRecord> records,
                            const DesignContext& ctx, MeanTarget target,
                            const BootstrapConfig& cfg);

// ---------------------------------------------------------------------------
// Replicate-level machinery, shared with the simulation lab so that one
// resampling pass can drive several statistics.

/// Captured records flattened to parallel arrays, plus the fixed n7.
struct CapturedRoster {
  std::vector<std::uint8_t> s1, s2, is_case;
  std::vector<double> x; // NaN when the record had no measurement
  std::int64_t n7 = 0;
  std::int64_t n_tot = 0;

  std::size_t size() const { return s1.size(); }

  static CapturedRoster build(std::span<const IndividualRecord> records,
                              const DesignContext& ctx);
};

/// Original-data constants reused across bootstrap replicates.
struct BootstrapPlan {
  CapturedRoster roster;
  std::int64_t n_c_cases = 0;
  std::int64_t n_c_noncases = 0;
  NonCaseTotalRule noncase_rule = NonCaseTotalRule::MirroredRatio;
  // FPC scale-shift constants for the overall target; valid when have_fpc.
  bool have_fpc = false;
  double a11 = 1.0, b11 = 0.0, a10 = 1.0, b10 = 0.0, a01 = 1.0, b01 = 0.0;

  static BootstrapPlan build(std::span<const IndividualRecord> records,
                             const DesignContext& ctx,
                             NonCaseTotalRule rule = NonCaseTotalRule::MirroredRatio);
};

/// One bootstrap replicate of the anchor estimators, evaluated on the
/// resample given by `idx` (indices into the roster). Absent values mean
/// the replicate was unusable for that target.
struct AnchorReplicate {
  std::optional<double> overall, cases, noncases, difference;
};

AnchorReplicate anchor_replicate(const BootstrapPlan& plan,
                                 std::span<const std::uint32_t> idx);

} // namespace anchorstream
