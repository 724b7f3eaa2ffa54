#include "urbanlra/urbanform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "urbanlra/error.hpp"

namespace urbanlra {

namespace {
constexpr double kDegPerRad = 180.0 / std::numbers::pi;
}

DeviationalEllipse deviational_ellipse(const std::vector<WeightedPoint>& points) {
  if (points.size() < 3) throw InvalidArgument("deviational_ellipse: need at least 3 points");
  double wsum = 0.0, mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    if (!(p.weight >= 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidArgument("deviational_ellipse: weights must be nonnegative, coordinates finite");
    wsum += p.weight;
    mx += p.weight * p.x;
    my += p.weight * p.y;
  }
  if (!(wsum > 0.0)) throw InvalidArgument("deviational_ellipse: total weight is zero");
  mx /= wsum;
  my /= wsum;

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += p.weight * dx * dx;
    syy += p.weight * dy * dy;
    sxy += p.weight * dx * dy;
  }
  const double spread = sxx + syy;
  if (!(spread > 0.0)) throw InvalidArgument("deviational_ellipse: all points coincide");

  // tan(theta) = (A + sqrt(A^2 + C^2)) / C, with theta the major-axis bearing.
  const double a = sxx - syy;
  const double c = 2.0 * sxy;
  const double b = std::hypot(a, c);
  const double flat = 1e-12 * spread;
  double theta = 0.0;
  if (std::fabs(a) <= flat && std::fabs(c) <= flat) {
    theta = 0.0;  // isotropic: bearing is arbitrary
  } else if (c == 0.0) {
    theta = a > 0.0 ? 90.0 : 0.0;
  } else {
    // For A < 0 the numerator cancels; (A + B) / C == C / (B - A).
    const double t = a >= 0.0 ? (a + b) / c : c / (b - a);
    theta = std::atan(t) * kDegPerRad;
    if (theta < 0.0) theta += 180.0;
  }

  const double th = theta / kDegPerRad;
  const double s = std::sin(th);
  const double co = std::cos(th);
  double along = 0.0, across = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    const double u = dx * s + dy * co;
    const double v = dx * co - dy * s;
    along += p.weight * u * u;
    across += p.weight * v * v;
  }
  double major = std::sqrt(along / wsum);
  double minor = std::sqrt(across / wsum);
  if (minor > major) {
    std::swap(major, minor);
    theta = std::fmod(theta + 90.0, 180.0);
  }
  if (minor <= 1e-9 * major)
    throw InvalidArgument("deviational_ellipse: points are collinear, ellipse is degenerate");
  if (theta >= 180.0) theta -= 180.0;

  return {mx, my, major, minor, theta, major / minor};
}

void ZoneSchedule::validate() const {
  if (breakpoints_km.empty()) throw InvalidArgument("zone schedule needs at least one breakpoint");
  double prev = 0.0;
  for (double b : breakpoints_km) {
    if (!(b > prev)) throw InvalidArgument("zone breakpoints must be positive and strictly increasing");
    prev = b;
  }
}

double elliptical_radius_km(double x, double y, const DeviationalEllipse& ellipse) {
  const double th = ellipse.rotation_deg / kDegPerRad;
  const double dx = x - ellipse.center_x;
  const double dy = y - ellipse.center_y;
  const double u = dx * std::sin(th) + dy * std::cos(th);
  const double v = (dx * std::cos(th) - dy * std::sin(th)) * ellipse.axis_ratio;
  return std::hypot(u, v) / 1000.0;
}

std::optional<double> Zone::proportion(std::size_t cluster) const {
  if (cell_count == 0) return std::nullopt;
  const std::size_t n = cluster < cluster_counts.size() ? cluster_counts[cluster] : 0;
  return static_cast<double>(n) / static_cast<double>(cell_count);
}

ZoneProfile zone_profiles(const Labels& labels, const std::vector<std::size_t>& region_ids,
                          const GridSpec& grid, const DeviationalEllipse& ellipse,
                          const ZoneSchedule& schedule) {
  schedule.validate();
  if (labels.size() != region_ids.size())
    throw InvalidArgument("zone_profiles: labels must cover every active region");
  std::size_t k = 0;
  for (std::size_t l : labels) k = std::max(k, l + 1);

  ZoneProfile profile;
  const auto& bps = schedule.breakpoints_km;
  for (std::size_t z = 0; z < bps.size(); ++z) {
    Zone zone;
    zone.index = z;
    zone.inner_km = z == 0 ? 0.0 : bps[z - 1];
    zone.outer_km = bps[z];
    zone.cluster_counts.assign(k, 0);
    profile.zones.push_back(std::move(zone));
  }

  profile.cell_zone.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [cx, cy] = grid.cell_center(region_ids[i]);
    const double rho = elliptical_radius_km(cx, cy, ellipse);
    const auto it = std::upper_bound(bps.begin(), bps.end(), rho);
    if (it == bps.end()) continue;
    const auto z = static_cast<std::size_t>(it - bps.begin());
    profile.cell_zone[i] = z;
    ++profile.zones[z].cell_count;
    ++profile.zones[z].cluster_counts[labels[i]];
  }
  return profile;
}

}  // namespace urbanlra
