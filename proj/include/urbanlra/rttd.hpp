#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "urbanlra/dense.hpp"
#include "urbanlra/ingest.hpp"

namespace urbanlra {

/// Number of temporally-dependent travel demands: 6 categories x 24 hours.
inline constexpr std::size_t kTtdCount = kDemandCount * kHoursPerDay;

/// Demand-major column layout: all 24 hours of H, then Tr, W, D, E, O.
constexpr std::size_t ttd_index(DemandCategory demand, int hour) {
  return ordinal(demand) * kHoursPerDay + static_cast<std::size_t>(hour);
}

struct TtdIndex {
  DemandCategory demand;
  int hour;
  std::size_t column;
};

TtdIndex ttd_from_column(std::size_t column);

/// Column label used in matrix files, e.g. "Tr07".
std::string ttd_label(std::size_t column);

/// Region x TTD count matrix. Row i describes grid cell region_ids[i].
struct RttdMatrix {
  Matrix values;                       // m x 144
  std::vector<std::size_t> region_ids; // strictly increasing

  std::size_t regions() const noexcept { return values.rows(); }
  double total() const;
  double row_total(std::size_t row) const;
};

struct BuildReport {
  std::size_t accepted = 0;
  std::size_t outside = 0;          // off-grid or masked
  std::size_t dropped_tag = 0;      // removed by the unmatched-tag policy
  std::vector<std::size_t> empty_regions;  // active regions with no accepted records
};

struct BuildResult {
  RttdMatrix matrix;
  BuildReport report;
};

BuildResult build_matrix(const std::vector<CheckInRecord>& records, const GridSpec& grid,
                         const CategoryMap& map);

/// 6 x 24 per-demand hourly totals summed over every row of an m x 144 matrix.
Matrix demand_profiles(const Matrix& values);

}  // namespace urbanlra
