#include "anchorstream/tableau.hpp"

#include <unordered_set>

namespace anchorstream {

DesignContext make_design_context(const CellCounts& cells, std::int64_t n_tot) {
  if (n_tot <= 0) throw PreconditionError("n_tot must be positive");
  if (cells.n1 < 0 || cells.n2 < 0 || cells.n3 < 0 || cells.n4 < 0 ||
      cells.n5 < 0 || cells.n6 < 0 || cells.n7 < 0)
    throw PreconditionError("cell counts must be non-negative");
  if (cells.total() != n_tot)
    throw PreconditionError("cell counts sum to " + std::to_string(cells.total()) +
                            " but n_tot is " + std::to_string(n_tot));
  // n_rs = 0 is representable (an empty tabulation is valid data); every
  // estimator that needs the random sample rejects it via its own
  // precondition, and validate_design flags it.
  const std::int64_t n_rs = cells.stream2_size();
  DesignContext ctx;
  ctx.n_tot = n_tot;
  ctx.n_rs = n_rs;
  ctx.psi = static_cast<double>(n_rs) / static_cast<double>(n_tot);
  return ctx;
}

Tableau tabulate(std::span<const IndividualRecord> records, std::int64_t n_tot) {
  if (n_tot <= 0) throw PreconditionError("n_tot must be positive");

  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());

  CellCounts cells;
  std::int64_t sampled = 0;
  for (const auto& r : records) {
    if (!seen.insert(r.id).second)
      throw ParseError("duplicate record id: " + r.id);
    if (!r.sampled()) {
      if (r.x_value)
        throw PreconditionError("record " + r.id +
                                " has a measurement but was never sampled");
      continue;
    }
    ++sampled;
    if (!r.is_case)
      throw PreconditionError("record " + r.id +
                              " was sampled but has no case status");
    const bool pos = *r.is_case;
    if (r.in_stream1 && r.in_stream2) {
      (pos ? cells.n2 : cells.n1)++;
    } else if (r.in_stream1) {
      (pos ? cells.n4 : cells.n3)++;
    } else {
      (pos ? cells.n6 : cells.n5)++;
    }
  }
  if (sampled > n_tot)
    throw PreconditionError("sampled records (" + std::to_string(sampled) +
                            ") exceed n_tot (" + std::to_string(n_tot) + ")");
  cells.n7 = n_tot - cells.observed();
  return Tableau{cells, make_design_context(cells, n_tot)};
}

std::vector<DesignWarning> validate_design(const CellCounts& cells,
                                           const DesignContext& ctx) {
  std::vector<DesignWarning> out;
  if (cells.n5 + cells.n6 == 0)
    out.push_back({WarningCode::EmptyStream2OnlyCell,
                   "stream-2-only cell is empty; the multinomial MLE estimator "
                   "is undefined"});
  if (ctx.n_rs <= 1)
    out.push_back({WarningCode::RandomSampleTooSmall,
                   "random sample has fewer than 2 members; the finite "
                   "population correction denominator is zero"});
  if (cells.n01() == 0)
    out.push_back({WarningCode::NoStream2OnlyCases,
                   "no cases found only by stream 2; the known-psi estimator "
                   "reports zero variance"});
  return out;
}

} // namespace anchorstream
