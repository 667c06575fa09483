#include "anchorstream/recordio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace anchorstream {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  // The schema has no quoting: ids must not contain commas.
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool parse_bool_field(const std::string& s, std::size_t line_no, const char* name) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ParseError("line " + std::to_string(line_no) + ": field '" + name +
                   "' must be 0 or 1, got '" + s + "'");
}

double parse_double_field(const std::string& s, std::size_t line_no, const char* name) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError("line " + std::to_string(line_no) + ": field '" + name +
                     "' is not a number: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

std::vector<IndividualRecord> parse_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty records file");
  if (trim(line) != "id,stream1,stream2,case,x")
    throw ParseError("line 1: expected header 'id,stream1,stream2,case,x'");

  std::vector<IndividualRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(trim(line));
    if (fields.size() != 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    IndividualRecord r;
    r.id = fields[0];
    if (r.id.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty id");
    r.in_stream1 = parse_bool_field(fields[1], line_no, "stream1");
    r.in_stream2 = parse_bool_field(fields[2], line_no, "stream2");
    if (!fields[3].empty()) r.is_case = parse_bool_field(fields[3], line_no, "case");
    if (!fields[4].empty()) r.x_value = parse_double_field(fields[4], line_no, "x");
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_csv(std::ostream& out, std::span<const IndividualRecord> records) {
  out << "id,stream1,stream2,case,x\n";
  char buf[40];
  for (const auto& r : records) {
    out << r.id << ',' << (r.in_stream1 ? 1 : 0) << ',' << (r.in_stream2 ? 1 : 0)
        << ',';
    if (r.is_case) out << (*r.is_case ? 1 : 0);
    out << ',';
    if (r.x_value) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.x_value);
      out << buf;
    }
    out << '\n';
  }
}

namespace {

bool json_bool(const nlohmann::json& v, const char* name, std::size_t index) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    const auto n = v.get<std::int64_t>();
    if (n == 0 || n == 1) return n == 1;
  }
  throw ParseError("record " + std::to_string(index) + ": field '" + name +
                   "' must be a boolean or 0/1");
}

} // namespace

std::vector<IndividualRecord> parse_records_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("JSON records file must be an array");

  std::vector<IndividualRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    if (!obj.is_object())
      throw ParseError("record " + std::to_string(i) + ": expected an object");
    IndividualRecord r;
    if (!obj.contains("id") || !obj["id"].is_string() || obj["id"].empty())
      throw ParseError("record " + std::to_string(i) + ": missing string field 'id'");
    r.id = obj["id"].get<std::string>();
    if (!obj.contains("stream1") || !obj.contains("stream2"))
      throw ParseError("record " + std::to_string(i) +
                       ": missing 'stream1' or 'stream2'");
    r.in_stream1 = json_bool(obj["stream1"], "stream1", i);
    r.in_stream2 = json_bool(obj["stream2"], "stream2", i);
    if (obj.contains("case") && !obj["case"].is_null())
      r.is_case = json_bool(obj["case"], "case", i);
    if (obj.contains("x") && !obj["x"].is_null()) {
      if (!obj["x"].is_number())
        throw ParseError("record " + std::to_string(i) + ": field 'x' must be a number");
      r.x_value = obj["x"].get<double>();
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<IndividualRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open records file: " + path);
  const auto ends_with = [&path](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".csv")) return parse_records_csv(in);
  if (ends_with(".json")) return parse_records_json(in);
  throw ParseError("records file must end in .csv or .json: " + path);
}

} // namespace anchorstream
