#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "urbanlra/clustering.hpp"
#include "urbanlra/ingest.hpp"
#include "urbanlra/lra.hpp"
#include "urbanlra/rttd.hpp"
#include "urbanlra/synth.hpp"
#include "urbanlra/urbanform.hpp"
#include "urbanlra/ustas.hpp"

// Readers and writers for every file exchanged between pipeline stages.
// Numbers are written in shortest round-trip form, so a value read back is
// bit-identical to the one written.

namespace urbanlra::io {

namespace fs = std::filesystem;

GridSpec read_grid(const fs::path& path);
void write_grid(const fs::path& path, const GridSpec& grid);

CategoryMap read_category_map(const fs::path& path);
void write_category_map(const fs::path& path, const CategoryMap& map);

SynthSpec read_synth_spec(const fs::path& path);

void write_checkins(const fs::path& path, const std::vector<CheckInRecord>& records);

// region_id,H00..O23
void write_matrix(const fs::path& path, const RttdMatrix& matrix);
RttdMatrix read_matrix(const fs::path& path);

// U.csv, S.csv, V.csv in one directory.
struct FactorFiles {
  SvdFactors factors;
  std::vector<std::size_t> region_ids;
};
void write_factors(const fs::path& dir, const SvdFactors& f,
                   const std::vector<std::size_t>& region_ids);
FactorFiles read_factors(const fs::path& dir);

// r,error,energy[,profile_residual]
void write_rank_scan(const fs::path& path, const RankScanReport& report);

// ustas_NN.csv per structure, optional ustas_NN.svg heatmaps.
void write_ustas(const fs::path& dir, const std::vector<Ustas>& structures,
                 const std::vector<std::size_t>& region_ids, bool svg);
std::string ustas_heatmap_svg(const UstasSummary& summary);

// region_id,c1..cr and ttd,c1..cr
struct RegionEmbedding {
  Matrix coords;
  std::vector<std::size_t> region_ids;
};
void write_region_embedding(const fs::path& path, const Matrix& coords,
                            const std::vector<std::size_t>& region_ids);
RegionEmbedding read_region_embedding(const fs::path& path);
void write_ttd_embedding(const fs::path& path, const Matrix& coords);
Matrix read_ttd_embedding(const fs::path& path);

// region_id,cluster
struct ClusterAssignment {
  std::vector<std::size_t> region_ids;
  Labels labels;
};
void write_clusters(const fs::path& path, const std::vector<std::size_t>& region_ids,
                    const Labels& labels);
ClusterAssignment read_clusters(const fs::path& path);

void write_centers(const fs::path& path, const Matrix& centers);
void write_validity(const fs::path& path, const std::vector<ValidityScores>& scores);
void write_characterization(const fs::path& path, const Matrix& similarity);

void write_ellipse(const fs::path& path, const DeviationalEllipse& e);
DeviationalEllipse read_ellipse(const fs::path& path);
void write_zones(const fs::path& path, const ZoneProfile& profile);
void write_cells_geojson(const fs::path& path, const GridSpec& grid,
                         const std::vector<std::size_t>& region_ids, const Labels& labels,
                         const std::vector<std::optional<std::size_t>>& cell_zone);

// region_id,archetype,name
void write_planted_labels(const fs::path& path, const std::vector<std::size_t>& region_ids,
                          const Labels& labels, const std::vector<std::string>& names);

}  // namespace urbanlra::io
