#include "urbanlra/rttd.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "urbanlra/error.hpp"

namespace urbanlra {

TtdIndex ttd_from_column(std::size_t column) {
  if (column >= kTtdCount) throw InvalidArgument("TTD column out of range");
  const auto demand = static_cast<DemandCategory>(column / kHoursPerDay);
  const int hour = static_cast<int>(column % kHoursPerDay);
  return {demand, hour, column};
}

std::string ttd_label(std::size_t column) {
  const auto t = ttd_from_column(column);
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", t.hour);
  return std::string(demand_code(t.demand)) + buf;
}

double RttdMatrix::total() const {
  double s = 0.0;
  for (double v : values.data()) s += v;
  return s;
}

double RttdMatrix::row_total(std::size_t row) const {
  double s = 0.0;
  for (double v : values.row(row)) s += v;
  return s;
}

BuildResult build_matrix(const std::vector<CheckInRecord>& records, const GridSpec& grid,
                         const CategoryMap& map) {
  BuildResult out;
  out.matrix.region_ids = grid.active_regions();
  const auto& ids = out.matrix.region_ids;
  out.matrix.values = Matrix(ids.size(), kTtdCount);

  for (const auto& rec : records) {
    const auto region = assign_region(rec.x, rec.y, grid);
    if (!region) {
      ++out.report.outside;
      continue;
    }
    const auto demand = map_demand(rec.demand_tag, map);
    if (!demand) {
      ++out.report.dropped_tag;
      continue;
    }
    const auto row = static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), *region) - ids.begin());
    out.matrix.values(row, ttd_index(*demand, rec.timestamp.local_hour)) += 1.0;
    ++out.report.accepted;
  }

  for (std::size_t r = 0; r < ids.size(); ++r)
    if (out.matrix.row_total(r) == 0.0) out.report.empty_regions.push_back(ids[r]);
  return out;
}

Matrix demand_profiles(const Matrix& values) {
  if (values.cols() != kTtdCount)
    throw InvalidArgument("demand_profiles expects 144 columns, got " +
                          std::to_string(values.cols()));
  Matrix profiles(kDemandCount, kHoursPerDay);
  for (std::size_t r = 0; r < values.rows(); ++r) {
    const auto row = values.row(r);
    for (std::size_t c = 0; c < kTtdCount; ++c)
      profiles(c / kHoursPerDay, c % kHoursPerDay) += row[c];
  }
  return profiles;
}

}  // namespace urbanlra
