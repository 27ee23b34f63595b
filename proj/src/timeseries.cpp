#include "densepix/error.hpp"
#include "densepix/geodata.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

namespace densepix {

TimeSeriesMatrix::TimeSeriesMatrix(std::vector<std::string> region_ids,
                                   std::vector<std::string> timestamps,
                                   std::vector<double> values, std::string unit)
    : region_ids_(std::move(region_ids)),
      timestamps_(std::move(timestamps)),
      values_(std::move(values)),
      unit_(std::move(unit)) {
  if (region_ids_.empty() || timestamps_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "time series needs at least one row and one column");
  }
  if (values_.size() != region_ids_.size() * timestamps_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "value count does not match N x T");
  }
  for (std::size_t i = 0; i < region_ids_.size(); ++i) {
    if (!index_.emplace(region_ids_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate series row '" + region_ids_[i] + "'");
    }
  }
  double previous = -std::numeric_limits<double>::infinity();
  for (const std::string& stamp : timestamps_) {
    const double t = parse_iso8601(stamp);
    if (!(t > previous)) {
      throw Error(ErrorCode::kNonMonotoneTime,
                  "timestamps must be strictly increasing (at '" + stamp + "')");
    }
    previous = t;
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kBadValue, "non-finite value for region '" +
                                            region_ids_[i / timestamps_.size()] + "'");
    }
  }
}

std::vector<double> TimeSeriesMatrix::column(std::size_t t) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, t);
  return out;
}

std::optional<std::size_t> TimeSeriesMatrix::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

[[noreturn]] void bad_timestamp(std::string_view text) {
  throw Error(ErrorCode::kParse, "unparseable ISO-8601 timestamp '" + std::string(text) + "'");
}

int read_digits(std::string_view text, std::size_t& pos, std::size_t count) {
  if (pos + count > text.size()) bad_timestamp(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
  if (ec != std::errc() || ptr != text.data() + pos + count) bad_timestamp(text);
  pos += count;
  return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad_timestamp(text);
  ++pos;
}

}  // namespace

double parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  const int y = read_digits(text, pos, 4);
  expect(text, pos, '-');
  const int m = read_digits(text, pos, 2);
  expect(text, pos, '-');
  const int d = read_digits(text, pos, 2);
  const year_month_day date{year{y}, month{static_cast<unsigned>(m)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok()) bad_timestamp(text);
  double seconds = static_cast<double>(sys_days{date}.time_since_epoch().count()) * 86400.0;
  if (pos == text.size()) return seconds;

  if (text[pos] != 'T' && text[pos] != ' ') bad_timestamp(text);
  ++pos;
  const int hh = read_digits(text, pos, 2);
  expect(text, pos, ':');
  const int mm = read_digits(text, pos, 2);
  double ss = 0.0;
  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    ss = read_digits(text, pos, 2);
    if (pos < text.size() && text[pos] == '.') {
      const std::size_t start = pos;
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == start + 1) bad_timestamp(text);
      double frac = 0.0;
      std::from_chars(text.data() + start, text.data() + pos, frac);
      ss += frac;
    }
  }
  if (hh > 24 || mm > 59 || ss >= 61.0) bad_timestamp(text);
  seconds += hh * 3600.0 + mm * 60.0 + ss;
  if (pos == text.size()) return seconds;
  if (text[pos] == 'Z' && pos + 1 == text.size()) return seconds;
  if (text[pos] == '+' || text[pos] == '-') {
    const double sign = text[pos] == '+' ? 1.0 : -1.0;
    ++pos;
    const int oh = read_digits(text, pos, 2);
    expect(text, pos, ':');
    const int om = read_digits(text, pos, 2);
    if (pos != text.size()) bad_timestamp(text);
    return seconds - sign * (oh * 3600.0 + om * 60.0);
  }
  bad_timestamp(text);
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParse, "unterminated quote on line " + std::to_string(line_no));
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_value(std::string_view text, const std::string& id, const std::string& stamp) {
  const std::string_view v = trim(text);
  const std::string where = "region '" + id + "' at " + stamp;
  if (v.empty()) throw Error(ErrorCode::kBadValue, "missing value for " + where);
  std::string_view digits = v;
  if (digits.front() == '+') digits.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::kBadValue, "unparseable value '" + std::string(v) + "' for " + where);
  }
  if (!std::isfinite(out)) {
    throw Error(ErrorCode::kBadValue, "non-finite value for " + where);
  }
  return out;
}

}  // namespace

TimeSeriesMatrix load_timeseries(std::string_view csv, const RegionSet& regions,
                                 std::string unit) {
  if (csv.size() >= 3 && csv.substr(0, 3) == "\xEF\xBB\xBF") csv.remove_prefix(3);

  std::vector<std::string_view> lines;
  while (!csv.empty()) {
    const std::size_t nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    csv.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::kParse, "empty CSV");

  const std::vector<std::string> header = split_csv_line(lines[0], 1);
  if (header.size() < 2 || trim(header[0]) != "id") {
    throw Error(ErrorCode::kParse, "CSV header must start with 'id' followed by timestamps");
  }
  std::vector<std::string> timestamps;
  for (std::size_t c = 1; c < header.size(); ++c) timestamps.emplace_back(trim(header[c]));
  const std::size_t cols = timestamps.size();

  std::vector<double> values(regions.size() * cols);
  std::vector<bool> seen(regions.size(), false);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[l], l + 1);
    const std::string id(trim(fields[0]));
    const auto row = regions.index_of(id);
    if (!row) throw Error(ErrorCode::kUnknownRegion, "unknown region '" + id + "' in CSV");
    if (seen[*row]) throw Error(ErrorCode::kDuplicateId, "region '" + id + "' appears twice in CSV");
    seen[*row] = true;
    if (fields.size() != cols + 1) {
      throw Error(ErrorCode::kBadValue, "row for region '" + id + "' has " +
                                            std::to_string(fields.size() - 1) + " values, expected " +
                                            std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      values[*row * cols + c] = parse_value(fields[c + 1], id, timestamps[c]);
    }
  }
  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (!seen[r]) {
      throw Error(ErrorCode::kMissingRegion, "region '" + regions[r].id + "' missing from CSV");
    }
  }
  return TimeSeriesMatrix(regions.ids(), std::move(timestamps), std::move(values), std::move(unit));
}

std::string to_csv(const TimeSeriesMatrix& ts) {
  std::ostringstream out;
  out.precision(17);
  out << "id";
  for (const std::string& stamp : ts.timestamps()) out << ',' << stamp;
  out << '\n';
  for (std::size_t r = 0; r < ts.rows(); ++r) {
    out << ts.region_ids()[r];
    for (double v : ts.row(r)) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace densepix
