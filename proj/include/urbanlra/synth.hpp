#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "urbanlra/clustering.hpp"
#include "urbanlra/ingest.hpp"
#include "urbanlra/rttd.hpp"

namespace urbanlra {

/// Hours [from, to] inclusive of one demand get `weight` added; from > to wraps past midnight.
struct ProfileBlock {
  DemandCategory demand = DemandCategory::O;
  int from = 0;
  int to = 23;
  double weight = 1.0;
};

/// Builds a 6 x 24 unit-sum intensity table: `floor` on every cell plus the blocks.
Matrix profile_from_blocks(double floor, const std::vector<ProfileBlock>& blocks);

struct Archetype {
  std::string name;
  Matrix profile;  // 6 x 24, nonnegative, unit sum
  double inner_km = 0.0;
  double outer_km = 0.0;
};

struct SynthSpec {
  GridSpec grid;                         // active_mask is ignored; placement decides it
  std::optional<double> center_x;        // city center, defaults to the grid's middle
  std::optional<double> center_y;
  std::vector<Archetype> archetypes;
  std::size_t cells_per_archetype = 25;
  double mean_checkins_per_cell = 500.0;
  double mixing_noise = 0.0;             // [0, 1)
  bool poisson = false;
  std::uint64_t seed = 0;
  bool emit_checkins = false;

  void validate() const;
};

struct SynthCity {
  GridSpec grid;             // active_mask = placed cells
  RttdMatrix matrix;         // realized counts
  Matrix expected;           // noiseless expectation, rank <= archetype count
  Labels planted;            // archetype index per matrix row
  std::vector<std::string> archetype_names;
  std::vector<CheckInRecord> checkins;  // only when emit_checkins
};

/// Places each archetype's cells at random inside its radial band around the
/// city center, then draws every cell's row from its own seeded stream.
/// Throws InvalidArgument when a band has fewer free cells than requested.
SynthCity generate_city(const SynthSpec& spec);

/// Tag written into generated check-ins for each category ("home", "dining", ...).
std::string_view demand_tag_name(DemandCategory d);

}  // namespace urbanlra
