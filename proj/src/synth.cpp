#include "urbanlra/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "urbanlra/error.hpp"
#include "urbanlra/textio.hpp"

namespace urbanlra {

namespace {

// Distinct stream tags so placement and per-cell draws never share a stream.
constexpr std::uint32_t kPlacementStream = 0x706c6163;
constexpr std::uint32_t kCellStream = 0x63656c6c;

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t tag, std::uint64_t key) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), tag,
                    static_cast<std::uint32_t>(key & 0xffffffffu),
                    static_cast<std::uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string synth_timestamp(std::size_t day, int hour, int minute, int second) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{year{2012} / January / 1} + days{static_cast<int>(day % 366)}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d+08:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hour, minute,
                second);
  return buf;
}

}  // namespace

std::string_view demand_tag_name(DemandCategory d) {
  static constexpr std::array<std::string_view, kDemandCount> names = {
      "home", "transportation", "work", "dining", "entertainment", "other"};
  return names[ordinal(d)];
}

Matrix profile_from_blocks(double floor, const std::vector<ProfileBlock>& blocks) {
  if (!(floor >= 0.0)) throw InvalidArgument("profile floor must be nonnegative");
  Matrix p(kDemandCount, kHoursPerDay, floor);
  for (const auto& b : blocks) {
    if (b.from < 0 || b.from > 23 || b.to < 0 || b.to > 23 || !(b.weight >= 0.0))
      throw InvalidArgument("profile block hours must lie in [0, 23] with nonnegative weight");
    int h = b.from;
    while (true) {
      p(ordinal(b.demand), static_cast<std::size_t>(h)) += b.weight;
      if (h == b.to) break;
      h = (h + 1) % 24;
    }
  }
  double total = 0.0;
  for (double v : p.data()) total += v;
  if (!(total > 0.0)) throw InvalidArgument("profile has zero total intensity");
  for (double& v : p.data()) v /= total;
  return p;
}

void SynthSpec::validate() const {
  GridSpec g = grid;
  g.active_mask.reset();
  g.validate();
  if (archetypes.size() < 1) throw InvalidArgument("synth spec needs at least one archetype");
  if (cells_per_archetype < 1) throw InvalidArgument("cells_per_archetype must be >= 1");
  if (!(mean_checkins_per_cell > 0.0)) throw InvalidArgument("mean_checkins_per_cell must be > 0");
  if (!(mixing_noise >= 0.0 && mixing_noise < 1.0))
    throw InvalidArgument("mixing_noise must lie in [0, 1)");
  for (const auto& a : archetypes) {
    if (a.profile.rows() != kDemandCount || a.profile.cols() != kHoursPerDay)
      throw InvalidArgument("archetype '" + a.name + "' profile must be 6 x 24");
    double total = 0.0;
    for (double v : a.profile.data()) {
      if (!(v >= 0.0)) throw InvalidArgument("archetype '" + a.name + "' has a negative intensity");
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw InvalidArgument("archetype '" + a.name + "' profile must sum to 1");
    if (!(a.inner_km >= 0.0 && a.outer_km > a.inner_km))
      throw InvalidArgument("archetype '" + a.name + "' band must satisfy 0 <= inner < outer");
  }
}

SynthCity generate_city(const SynthSpec& spec) {
  spec.validate();
  GridSpec grid = spec.grid;
  grid.active_mask.reset();
  const double cx = spec.center_x.value_or(grid.origin_x + 0.5 * grid.cell_size * grid.n_cols);
  const double cy = spec.center_y.value_or(grid.origin_y + 0.5 * grid.cell_size * grid.n_rows);

  const std::size_t n_arch = spec.archetypes.size();
  std::vector<std::optional<std::size_t>> owner(grid.cell_count());
  for (std::size_t a = 0; a < n_arch; ++a) {
    const auto& arch = spec.archetypes[a];
    std::vector<std::size_t> candidates;
    for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
      if (owner[cell]) continue;
      const auto [x, y] = grid.cell_center(cell);
      const double r_km = std::hypot(x - cx, y - cy) / 1000.0;
      if (r_km >= arch.inner_km && r_km < arch.outer_km) candidates.push_back(cell);
    }
    if (candidates.size() < spec.cells_per_archetype)
      throw InvalidArgument("archetype '" + arch.name + "' band [" + format_double(arch.inner_km) +
                            ", " + format_double(arch.outer_km) + ") km holds " +
                            std::to_string(candidates.size()) + " free cells, " +
                            std::to_string(spec.cells_per_archetype) + " requested");
    auto rng = stream(spec.seed, kPlacementStream, a);
    for (std::size_t i = candidates.size(); i > 1; --i)
      std::swap(candidates[i - 1], candidates[rng() % i]);
    for (std::size_t i = 0; i < spec.cells_per_archetype; ++i) owner[candidates[i]] = a;
  }

  SynthCity city;
  std::vector<std::size_t> active;
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell)
    if (owner[cell]) active.push_back(cell);
  grid.active_mask = active;
  city.grid = grid;
  city.matrix.region_ids = active;
  city.matrix.values = Matrix(active.size(), kTtdCount);
  city.expected = Matrix(active.size(), kTtdCount);
  for (const auto& a : spec.archetypes) city.archetype_names.push_back(a.name);

  for (std::size_t row = 0; row < active.size(); ++row) {
    const std::size_t cell = active[row];
    const std::size_t arch = *owner[cell];
    city.planted.push_back(arch);
    auto rng = stream(spec.seed, kCellStream, cell);

    // Uniform draw from the simplex for this cell's background mixture.
    std::vector<double> mix(n_arch);
    double mix_total = 0.0;
    for (double& w : mix) {
      w = -std::log1p(-unit_uniform(rng));
      mix_total += w;
    }
    for (double& w : mix) w /= mix_total;

    const auto& own = spec.archetypes[arch].profile;
    for (std::size_t c = 0; c < kTtdCount; ++c) {
      const std::size_t d = c / kHoursPerDay;
      const std::size_t t = c % kHoursPerDay;
      double background = 0.0;
      for (std::size_t a = 0; a < n_arch; ++a) background += mix[a] * spec.archetypes[a].profile(d, t);
      const double lambda = spec.mean_checkins_per_cell *
                            ((1.0 - spec.mixing_noise) * own(d, t) + spec.mixing_noise * background);
      city.expected(row, c) = lambda;
      double count = 0.0;
      if (spec.poisson) {
        if (lambda > 0.0) count = static_cast<double>(std::poisson_distribution<long long>(lambda)(rng));
      } else {
        count = std::round(lambda);
      }
      city.matrix.values(row, c) = count;
    }

    if (spec.emit_checkins) {
      const auto [x0, y0] = grid.cell_center(cell);
      std::size_t seq = 0;
      for (std::size_t c = 0; c < kTtdCount; ++c) {
        const auto ttd = ttd_from_column(c);
        const auto n = static_cast<std::size_t>(city.matrix.values(row, c));
        for (std::size_t j = 0; j < n; ++j, ++seq) {
          CheckInRecord rec;
          rec.user_id = "s" + std::to_string(cell) + "_" + std::to_string(seq);
          const int minute = static_cast<int>(rng() % 60);
          const int second = static_cast<int>(rng() % 60);
          rec.timestamp_text = synth_timestamp(seq, ttd.hour, minute, second);
          rec.timestamp = *parse_timestamp(rec.timestamp_text);
          rec.x = x0 + (unit_uniform(rng) - 0.5) * 0.9 * grid.cell_size;
          rec.y = y0 + (unit_uniform(rng) - 0.5) * 0.9 * grid.cell_size;
          rec.demand_tag = std::string(demand_tag_name(ttd.demand));
          city.checkins.push_back(std::move(rec));
        }
      }
    }
  }
  return city;
}

}  // namespace urbanlra
