#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "urbanlra/clustering.hpp"
#include "urbanlra/ingest.hpp"

namespace urbanlra {

struct WeightedPoint {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

/// One-sigma standard deviational ellipse. rotation_deg is the direction of
/// the major axis, clockwise from north, in [0, 180).
struct DeviationalEllipse {
  double center_x = 0.0;
  double center_y = 0.0;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double rotation_deg = 0.0;
  double axis_ratio = 1.0;
};

/// Throws InvalidArgument for fewer than 3 points, nonpositive total weight,
/// negative weights, or a collinear (zero-width) point mass.
DeviationalEllipse deviational_ellipse(const std::vector<WeightedPoint>& points);

/// Concentric ellipses sharing the base ellipse's center, rotation and axis
/// ratio. Breakpoints are semi-major lengths in km.
struct ZoneSchedule {
  std::vector<double> breakpoints_km = {1, 3, 5, 7, 9, 11, 13, 15, 17};

  void validate() const;
};

/// Semi-major length (km) of the schedule ellipse passing through (x, y).
double elliptical_radius_km(double x, double y, const DeviationalEllipse& ellipse);

struct Zone {
  std::size_t index = 0;
  double inner_km = 0.0;
  double outer_km = 0.0;
  std::size_t cell_count = 0;
  std::vector<std::size_t> cluster_counts;  // length = number of clusters

  bool empty() const noexcept { return cell_count == 0; }
  /// Count-based proportion; undefined for empty zones.
  std::optional<double> proportion(std::size_t cluster) const;
};

struct ZoneProfile {
  std::vector<Zone> zones;
  std::vector<std::optional<std::size_t>> cell_zone;  // per labelled region row
};

/// `labels[i]` is the cluster of grid cell `region_ids[i]`.
ZoneProfile zone_profiles(const Labels& labels, const std::vector<std::size_t>& region_ids,
                          const GridSpec& grid, const DeviationalEllipse& ellipse,
                          const ZoneSchedule& schedule);

}  // namespace urbanlra
