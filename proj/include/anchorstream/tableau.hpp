#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anchorstream/errors.hpp"

namespace anchorstream {

/// One member of the enumerated closed population, as observed by the two
/// surveillance streams. Case status and the measurement are only known
/// for individuals sampled by at least one stream, so both are optional.
struct IndividualRecord {
  std::string id;
  bool in_stream1 = false;
  bool in_stream2 = false;
  std::optional<bool> is_case;
  std::optional<double> x_value;

  bool sampled() const { return in_stream1 || in_stream2; }
};

/// The seven-cell tally of capture histories and test results:
///   n1  both streams, negative        n2  both streams, positive
///   n3  stream 1 only, negative       n4  stream 1 only, positive
///   n5  stream 2 only, negative       n6  stream 2 only, positive
///   n7  sampled by neither stream
struct CellCounts {
  std::int64_t n1 = 0, n2 = 0, n3 = 0, n4 = 0, n5 = 0, n6 = 0, n7 = 0;

  std::int64_t observed() const { return n1 + n2 + n3 + n4 + n5 + n6; }
  std::int64_t total() const { return observed() + n7; }

  // Capture-recapture aliases for the positive cells.
  std::int64_t n11() const { return n2; }        // cases caught by both
  std::int64_t n10() const { return n4; }        // cases caught by stream 1 only
  std::int64_t n01() const { return n6; }        // cases caught by stream 2 only
  std::int64_t cases_stream1() const { return n2 + n4; }   // n1.
  std::int64_t cases_stream2() const { return n2 + n6; }   // n.1
  std::int64_t cases_observed() const { return n2 + n4 + n6; } // n_c
  std::int64_t stream2_size() const { return n1 + n2 + n5 + n6; } // n_RS
  std::int64_t stream1_size() const { return n1 + n2 + n3 + n4; }
};

/// Design constants fixed by the sampling plan: the enumerated population
/// size, the random-sample size, and the selection rate psi = n_rs / n_tot.
/// psi is always derived from the tabulated counts, never user-supplied,
/// so it cannot disagree with the data.
struct DesignContext {
  std::int64_t n_tot = 0;
  std::int64_t n_rs = 0;
  double psi = 0.0;
};

/// Builds the design context from tabulated counts, checking the partition
/// (cells must sum to n_tot) and that the random sample is non-empty.
DesignContext make_design_context(const CellCounts& cells, std::int64_t n_tot);

struct Tableau {
  CellCounts cells;
  DesignContext ctx;
};

/// Reduces individual records to Table-style cell counts. Records carrying
/// no stream flag are allowed (they are n7 members); n7 itself is derived
/// as n_tot minus everything observed.
///
/// Throws ParseError for duplicate ids and PreconditionError when a sampled
/// record lacks case status, an unsampled record carries a measurement, or
/// the sampled records outnumber n_tot.
Tableau tabulate(std::span<const IndividualRecord> records, std::int64_t n_tot);

enum class WarningCode {
  EmptyStream2OnlyCell, // n5 + n6 = 0: the multinomial MLE is undefined
  RandomSampleTooSmall, // n_rs <= 1: the FPC denominator is zero
  NoStream2OnlyCases,   // n01 = 0: zero variance for the known-psi estimator
};

struct DesignWarning {
  WarningCode code;
  std::string message;
};

/// Advisory checks for degenerate configurations that downstream estimators
/// will reject; never throws.
std::vector<DesignWarning> validate_design(const CellCounts& cells,
                                           const DesignContext& ctx);

} // namespace anchorstream
