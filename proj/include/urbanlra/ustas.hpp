#pragma once

#include <cstddef>
#include <vector>

#include "urbanlra/dense.hpp"
#include "urbanlra/lra.hpp"

namespace urbanlra {

/// One urban spatial-temporal activity structure: the i-th rank-1 component
/// of the truncated decomposition, pairing a region loading vector with a
/// TTD loading vector.
struct Ustas {
  std::size_t index = 0;  // 1-based rank position
  double sigma = 0.0;
  std::vector<double> spatial;   // length m, column i of U
  std::vector<double> temporal;  // length n, column i of V
};

/// Throws InvalidArgument if any retained singular value is zero.
std::vector<Ustas> extract_ustas(const TruncatedLra& t);

/// Regions and TTDs in one r-dimensional coordinate system:
/// region_coords = U sqrt(S), ttd_coords = V sqrt(S), so that
/// region_coords * ttd_coords^T reproduces the rank-r reconstruction.
struct JointEmbedding {
  Matrix region_coords;  // m x r
  Matrix ttd_coords;     // n x r

  std::size_t rank() const noexcept { return region_coords.cols(); }
};

JointEmbedding joint_embedding(const TruncatedLra& t);

struct RegionLoading {
  std::size_t row = 0;  // row position in the matrix
  double loading = 0.0;
};

struct UstasSummary {
  std::size_t index = 0;
  double sigma = 0.0;
  std::vector<RegionLoading> top_regions;  // by |loading|, descending
  Matrix temporal_table;                   // 6 x 24, entry (d, t) = temporal[d*24 + t]
};

/// Needs 144-entry temporal vectors for the demand-by-hour table.
std::vector<UstasSummary> ustas_report(const std::vector<Ustas>& structures, std::size_t top_k);

}  // namespace urbanlra
