#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "urbanlra/dense.hpp"

namespace urbanlra {

using Labels = std::vector<std::size_t>;

/// 1 - cos(a, b), clamped to [0, 2]. A zero vector sits at distance 1 from
/// every nonzero vector and at distance 0 from another zero vector.
double cosine_distance(std::span<const double> a, std::span<const double> b);

struct ClusteringConfig {
  std::size_t k = 2;
  std::size_t n_restarts = 16;
  std::size_t max_iters = 300;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  unsigned threads = 1;  // 0 = hardware concurrency; output does not depend on it
};

struct ClusterResult {
  Labels labels;
  Matrix centers;  // k x r, unit length (or zero for an all-zero cluster)
  double inertia = 0.0;
  std::size_t iterations_run = 0;
  std::size_t restart_chosen = 0;
  std::vector<double> inertia_trace;  // chosen restart, one value per assignment step
  std::size_t inertia_increases = 0;  // over every restart; zero for a correct Lloyd loop
};

/// Spherical K-means under cosine distance, best of `n_restarts` by inertia.
/// Each restart seeds greedily by farthest point from a random first point
/// drawn from a stream keyed by (seed, restart, k).
ClusterResult kmeans(const Matrix& points, const ClusteringConfig& config);

/// Normalized mean direction of each cluster's unit-normalized members.
Matrix cluster_centers(const Matrix& points, const Labels& labels, std::size_t k);

/// Returned when every cluster has zero diameter.
inline constexpr double kDunnInfinite = std::numeric_limits<double>::infinity();

/// Min single-linkage distance between clusters over max cluster diameter.
double dunn_index(const Matrix& points, const Labels& labels);

/// Mean over clusters of max_{j != i} (s_i + s_j) / d(c_i, c_j). Throws
/// InvalidArgument naming the pair when two centers coincide.
double davies_bouldin(const Matrix& points, const Labels& labels);

/// Mean silhouette; members of singleton clusters score 0.
double silhouette(const Matrix& points, const Labels& labels);

struct ValidityScores {
  std::size_t k = 0;
  double dunn = 0.0;
  double davies_bouldin = 0.0;
  double silhouette = 0.0;
};

struct KSelection {
  std::vector<ValidityScores> scores;
  std::vector<ClusterResult> results;  // parallel to scores
  std::size_t recommended = 0;
};

/// Clusters once per k in [k_min, k_max] and recommends the k preferred by the
/// most criteria (Dunn max, DBI min, silhouette max); ties go to smaller k.
KSelection select_k(const Matrix& points, std::size_t k_min, std::size_t k_max,
                    const ClusteringConfig& config);

/// Cosine similarity between every cluster center and every TTD coordinate row.
Matrix characterize_clusters(const ClusterResult& result, const Matrix& ttd_coords);

double adjusted_rand_index(const Labels& a, const Labels& b);

}  // namespace urbanlra
