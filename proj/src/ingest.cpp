#include "urbanlra/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "urbanlra/error.hpp"
#include "urbanlra/textio.hpp"

namespace urbanlra {

namespace {

constexpr std::array<std::string_view, kDemandCount> kCodes = {"H", "Tr", "W", "D", "E", "O"};

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string normalize_tag(std::string_view tag) {
  std::string out(trim(tag));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view demand_code(DemandCategory d) { return kCodes[ordinal(d)]; }

std::optional<DemandCategory> parse_demand_code(std::string_view code) {
  for (std::size_t i = 0; i < kCodes.size(); ++i)
    if (kCodes[i] == code) return static_cast<DemandCategory>(i);
  return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  // 2012-03-01T12:30:00
  if (text.size() < 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    return std::nullopt;
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) ||
      !parse_int(text.substr(8, 2), day) || !parse_int(text.substr(11, 2), hour) ||
      !parse_int(text.substr(14, 2), minute) || !parse_int(text.substr(17, 2), second))
    return std::nullopt;
  if (hour > 23 || minute > 59 || second > 60 || hour < 0 || minute < 0 || second < 0)
    return std::nullopt;

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) return std::nullopt;
  }
  if (pos >= text.size()) return std::nullopt;

  int offset_minutes = 0;
  const std::string_view zone = text.substr(pos);
  if (zone == "Z") {
    offset_minutes = 0;
  } else {
    if (zone.size() != 6 || (zone[0] != '+' && zone[0] != '-') || zone[3] != ':')
      return std::nullopt;
    int oh = 0, om = 0;
    if (!parse_int(zone.substr(1, 2), oh) || !parse_int(zone.substr(4, 2), om)) return std::nullopt;
    if (oh > 23 || om > 59 || oh < 0 || om < 0) return std::nullopt;
    offset_minutes = (zone[0] == '-' ? -1 : 1) * (oh * 60 + om);
  }

  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  Timestamp ts;
  ts.epoch_seconds = static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 + second -
                     static_cast<std::int64_t>(offset_minutes) * 60;
  ts.utc_offset_minutes = offset_minutes;
  ts.local_hour = hour;
  return ts;
}

ParseResult parse_records(std::istream& in) {
  if (!in) throw IoError("check-in stream is not readable");
  ParseResult result;
  std::string line;
  if (!std::getline(in, line)) {
    if (in.bad()) throw IoError("failed reading check-in stream");
    throw SchemaError("check-in CSV is empty; expected header '" + std::string(kCheckInHeader) + "'");
  }
  std::string_view header = strip_line(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (header != kCheckInHeader)
    throw SchemaError("check-in CSV header mismatch: got '" + std::string(header) + "', expected '" +
                      std::string(kCheckInHeader) + "'");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_line(line);
    if (trim(row).empty()) continue;
    const auto fields = split_csv(row);
    CheckInRecord rec;
    bool ok = fields.size() == 5;
    if (ok) {
      rec.user_id = fields[0];
      rec.timestamp_text = std::string(trim(fields[1]));
      rec.demand_tag = fields[4];
      const auto ts = parse_timestamp(rec.timestamp_text);
      ok = ts.has_value() && parse_double(fields[2], rec.x) && parse_double(fields[3], rec.y) &&
           !rec.user_id.empty();
      if (ts) rec.timestamp = *ts;
    }
    if (ok) {
      result.records.push_back(std::move(rec));
    } else {
      result.report.skipped_lines.push_back(line_no);
    }
  }
  if (in.bad()) throw IoError("failed reading check-in stream");
  result.report.parsed = result.records.size();
  return result;
}

void write_records(std::ostream& out, const std::vector<CheckInRecord>& records) {
  out << kCheckInHeader << '\n';
  for (const auto& r : records) {
    out << csv_field(r.user_id) << ',' << r.timestamp_text << ',' << format_double(r.x) << ','
        << format_double(r.y) << ',' << csv_field(r.demand_tag) << '\n';
  }
}

CategoryMap CategoryMap::standard() {
  CategoryMap map(UnmatchedPolicy::MapToOther);
  map.add("home", DemandCategory::H);
  map.add("transportation", DemandCategory::Tr);
  map.add("work", DemandCategory::W);
  map.add("dining", DemandCategory::D);
  map.add("entertainment", DemandCategory::E);
  map.add("other", DemandCategory::O);
  for (DemandCategory d : kAllDemands) map.add(demand_code(d), d);
  return map;
}

void CategoryMap::add(std::string_view tag, DemandCategory category) {
  tags_[normalize_tag(tag)] = category;
}

std::optional<DemandCategory> CategoryMap::lookup(std::string_view tag) const {
  const auto it = tags_.find(normalize_tag(tag));
  if (it == tags_.end()) return std::nullopt;
  return it->second;
}

std::optional<DemandCategory> map_demand(std::string_view tag, const CategoryMap& map) {
  if (auto hit = map.lookup(tag)) return hit;
  if (map.policy() == UnmatchedPolicy::MapToOther) return DemandCategory::O;
  return std::nullopt;
}

void GridSpec::validate() {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw InvalidArgument("grid cell_size must be positive");
  if (n_cols == 0 || n_rows == 0) throw InvalidArgument("grid must have at least one cell");
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y))
    throw InvalidArgument("grid origin must be finite");
  if (active_mask) {
    auto& mask = *active_mask;
    std::sort(mask.begin(), mask.end());
    mask.erase(std::unique(mask.begin(), mask.end()), mask.end());
    if (!mask.empty() && mask.back() >= cell_count())
      throw InvalidArgument("active_mask index " + std::to_string(mask.back()) +
                            " exceeds cell count " + std::to_string(cell_count()));
  }
}

bool GridSpec::is_active(std::size_t index) const {
  if (index >= cell_count()) return false;
  if (!active_mask) return true;
  return std::binary_search(active_mask->begin(), active_mask->end(), index);
}

std::vector<std::size_t> GridSpec::active_regions() const {
  if (active_mask) return *active_mask;
  std::vector<std::size_t> all(cell_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

std::pair<double, double> GridSpec::cell_center(std::size_t index) const {
  const std::size_t col = index % n_cols;
  const std::size_t row = index / n_cols;
  return {origin_x + (static_cast<double>(col) + 0.5) * cell_size,
          origin_y + (static_cast<double>(row) + 0.5) * cell_size};
}

std::optional<std::size_t> assign_region(double x, double y, const GridSpec& grid) {
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  const double fx = std::floor((x - grid.origin_x) / grid.cell_size);
  const double fy = std::floor((y - grid.origin_y) / grid.cell_size);
  if (fx < 0.0 || fy < 0.0) return std::nullopt;
  if (fx >= static_cast<double>(grid.n_cols) || fy >= static_cast<double>(grid.n_rows))
    return std::nullopt;
  const std::size_t index =
      static_cast<std::size_t>(fy) * grid.n_cols + static_cast<std::size_t>(fx);
  if (!grid.is_active(index)) return std::nullopt;
  return index;
}

DedupResult dedup_filter(const std::vector<CheckInRecord>& records, double min_gap_seconds) {
  using ExactKey = std::tuple<std::string, std::int64_t, double, double, std::string>;
  using PlaceKey = std::tuple<std::string, double, double>;
  std::set<ExactKey> seen;
  std::map<PlaceKey, std::int64_t> last_retained;

  DedupResult out;
  out.records.reserve(records.size());
  for (const auto& r : records) {
    ExactKey exact{r.user_id, r.timestamp.epoch_seconds, r.x, r.y, r.demand_tag};
    if (seen.contains(exact)) {
      ++out.dropped;
      continue;
    }
    PlaceKey place{r.user_id, r.x, r.y};
    const auto it = last_retained.find(place);
    if (it != last_retained.end()) {
      const auto gap = std::llabs(r.timestamp.epoch_seconds - it->second);
      if (static_cast<double>(gap) < min_gap_seconds) {
        ++out.dropped;
        continue;
      }
    }
    seen.insert(std::move(exact));
    last_retained[std::move(place)] = r.timestamp.epoch_seconds;
    out.records.push_back(r);
  }
  return out;
}

std::pair<double, double> equirectangular_project(double lon, double lat, double ref_lon,
                                                  double ref_lat) {
  constexpr double kEarthRadius = 6371008.8;
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double x = (lon - ref_lon) * kDeg * kEarthRadius * std::cos(ref_lat * kDeg);
  const double y = (lat - ref_lat) * kDeg * kEarthRadius;
  return {x, y};
}

}  // namespace urbanlra
