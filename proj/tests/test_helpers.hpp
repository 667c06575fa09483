#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anchorstream/rng.hpp"
#include "anchorstream/tableau.hpp"

namespace testutil {

// Builds a roster realizing the given cell counts. Cells are numbered 1..6
// as in the tally; x_for(cell, index_within_cell) supplies measurements
// (return nullopt for none). n7 members are emitted as unsampled records.
inline std::vector<anchorstream::IndividualRecord> roster_from_cells(
    const anchorstream::CellCounts& cells,
    const std::function<std::optional<double>(int, std::int64_t)>& x_for = nullptr) {
  std::vector<anchorstream::IndividualRecord> out;
  out.reserve(static_cast<std::size_t>(cells.total()));
  int next_id = 0;
  const auto emit = [&](int cell, std::int64_t count, bool s1, bool s2, bool is_case) {
    for (std::int64_t i = 0; i < count; ++i) {
      anchorstream::IndividualRecord r;
      r.id = "r" + std::to_string(next_id++);
      r.in_stream1 = s1;
      r.in_stream2 = s2;
      if (s1 || s2) {
        r.is_case = is_case;
        if (x_for) r.x_value = x_for(cell, i);
      }
      out.push_back(std::move(r));
    }
  };
  emit(1, cells.n1, true, true, false);
  emit(2, cells.n2, true, true, true);
  emit(3, cells.n3, true, false, false);
  emit(4, cells.n4, true, false, true);
  emit(5, cells.n5, false, true, false);
  emit(6, cells.n6, false, true, true);
  emit(7, cells.n7, false, false, false);
  return out;
}

inline std::optional<double> case_indicator(int cell, std::int64_t) {
  return cell == 2 || cell == 4 || cell == 6 ? 1.0 : 0.0;
}

// Random valid table with a non-empty stream-2-only cell and at least one
// observed case; sizes stay modest so float comparisons remain sharp.
inline anchorstream::CellCounts random_cells(anchorstream::Rng& rng,
                                             std::int64_t max_cell = 60) {
  anchorstream::CellCounts c;
  for (;;) {
    const auto draw = [&] {
      return static_cast<std::int64_t>(rng.next_below(
          static_cast<std::uint64_t>(max_cell)));
    };
    c.n1 = draw();
    c.n2 = draw();
    c.n3 = draw();
    c.n4 = draw();
    c.n5 = draw();
    c.n6 = draw();
    c.n7 = draw();
    if (c.n5 + c.n6 >= 1 && c.cases_observed() >= 1 && c.stream2_size() >= 2)
      return c;
  }
}

} // namespace testutil
