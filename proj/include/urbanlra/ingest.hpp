#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urbanlra {

/// The six demand categories in their fixed canonical order.
enum class DemandCategory : std::uint8_t { H = 0, Tr = 1, W = 2, D = 3, E = 4, O = 5 };

inline constexpr std::size_t kDemandCount = 6;
inline constexpr std::size_t kHoursPerDay = 24;

inline constexpr std::array<DemandCategory, kDemandCount> kAllDemands = {
    DemandCategory::H, DemandCategory::Tr, DemandCategory::W,
    DemandCategory::D, DemandCategory::E,  DemandCategory::O};

constexpr std::size_t ordinal(DemandCategory d) { return static_cast<std::size_t>(d); }

/// Short code used in files: "H", "Tr", "W", "D", "E", "O".
std::string_view demand_code(DemandCategory d);
std::optional<DemandCategory> parse_demand_code(std::string_view code);

/// An instant parsed from ISO-8601 text. The local hour is taken in the
/// record's own offset, since activity rhythms follow local clock time.
struct Timestamp {
  std::int64_t epoch_seconds = 0;  // UTC
  int utc_offset_minutes = 0;
  int local_hour = 0;              // [0, 23]
};

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)". Returns nullopt on any
/// malformed or out-of-range component.
std::optional<Timestamp> parse_timestamp(std::string_view text);

struct CheckInRecord {
  std::string user_id;
  std::string timestamp_text;
  Timestamp timestamp;
  double x = 0.0;  // easting, meters
  double y = 0.0;  // northing, meters
  std::string demand_tag;
};

struct ParseReport {
  std::size_t parsed = 0;
  std::vector<std::size_t> skipped_lines;  // 1-based line numbers in the input
};

struct ParseResult {
  std::vector<CheckInRecord> records;
  ParseReport report;
};

inline constexpr std::string_view kCheckInHeader = "user_id,timestamp,x,y,demand_tag";

/// Reads the check-in CSV. Malformed rows are skipped and reported; a bad
/// header raises SchemaError and an unreadable stream raises IoError.
ParseResult parse_records(std::istream& in);

/// Writes records in the same CSV schema parse_records reads.
void write_records(std::ostream& out, const std::vector<CheckInRecord>& records);

enum class UnmatchedPolicy { MapToOther, Drop };

/// Maps raw demand tags onto categories. Keys are matched after trimming
/// surrounding whitespace and lower-casing.
class CategoryMap {
public:
  CategoryMap() = default;
  explicit CategoryMap(UnmatchedPolicy policy) : policy_(policy) {}

  /// English category names plus the short codes, unmatched tags go to O.
  static CategoryMap standard();

  void add(std::string_view tag, DemandCategory category);
  std::optional<DemandCategory> lookup(std::string_view tag) const;

  UnmatchedPolicy policy() const noexcept { return policy_; }
  void set_policy(UnmatchedPolicy p) noexcept { policy_ = p; }
  const std::map<std::string, DemandCategory>& tags() const noexcept { return tags_; }

private:
  std::map<std::string, DemandCategory> tags_;
  UnmatchedPolicy policy_ = UnmatchedPolicy::MapToOther;
};

/// nullopt means the record is dropped under the map's policy.
std::optional<DemandCategory> map_demand(std::string_view tag, const CategoryMap& map);

/// Regular lattice over the study rectangle. Cells are half-open
/// [left, right) x [bottom, top) and numbered row-major from the bottom-left.
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 1000.0;
  std::size_t n_cols = 1;
  std::size_t n_rows = 1;
  std::optional<std::vector<std::size_t>> active_mask;  // sorted, unique

  std::size_t cell_count() const noexcept { return n_cols * n_rows; }

  /// Throws InvalidArgument when an invariant is broken. Sorts and dedups the mask.
  void validate();

  bool is_active(std::size_t index) const;

  /// Active region indices in increasing order.
  std::vector<std::size_t> active_regions() const;

  /// Planar center of a cell.
  std::pair<double, double> cell_center(std::size_t index) const;
};

std::optional<std::size_t> assign_region(double x, double y, const GridSpec& grid);

struct DedupResult {
  std::vector<CheckInRecord> records;
  std::size_t dropped = 0;
};

/// Drops exact duplicates and repeated check-ins of one user at one location
/// closer than `min_gap_seconds` to that user's previous retained record there.
/// "Location" means identical (x, y). Input order is preserved.
DedupResult dedup_filter(const std::vector<CheckInRecord>& records, double min_gap_seconds = 60.0);

/// Local equirectangular projection around a reference point, for toy data
/// given in degrees. Returns planar meters relative to the reference.
std::pair<double, double> equirectangular_project(double lon, double lat, double ref_lon,
                                                  double ref_lat);

}  // namespace urbanlra
