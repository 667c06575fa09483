#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "anchorstream/tableau.hpp"

namespace anchorstream {

/// CSV record schema: header `id,stream1,stream2,case,x`, booleans written
/// as 0/1, missing optionals as empty fields. Parse errors carry the
/// offending line number.
std::vector<IndividualRecord> parse_records_csv(std::istream& in);
void write_records_csv(std::ostream& out, std::span<const IndividualRecord> records);

/// JSON record schema: an array of objects with keys id, stream1, stream2,
/// case, x. Booleans may be JSON booleans or 0/1 numbers; case and x may be
/// null or absent.
std::vector<IndividualRecord> parse_records_json(std::istream& in);

/// Loads records by file extension (.csv or .json).
std::vector<IndividualRecord> load_records(const std::string& path);

} // namespace anchorstream
