#include "urbanlra/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "urbanlra/error.hpp"
#include "urbanlra/parallel.hpp"

namespace urbanlra {

namespace {

// Unit-normalized copy of a point set; zero rows stay zero and are flagged.
struct UnitPoints {
  Matrix unit;
  std::vector<bool> zero;
};

UnitPoints normalize_rows(const Matrix& points) {
  UnitPoints up{points, std::vector<bool>(points.rows(), false)};
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto row = up.unit.row(i);
    const double n = norm2(row);
    if (n == 0.0) {
      up.zero[i] = true;
      continue;
    }
    for (double& v : row) v /= n;
  }
  return up;
}

double unit_distance(std::span<const double> a, bool a_zero, std::span<const double> b,
                     bool b_zero) {
  if (a_zero || b_zero) return (a_zero && b_zero) ? 0.0 : 1.0;
  return std::clamp(1.0 - dot(a, b), 0.0, 2.0);
}

std::size_t cluster_count(const Labels& labels) {
  std::size_t k = 0;
  for (std::size_t l : labels) k = std::max(k, l + 1);
  return k;
}

// Validates labels for the validity indices and returns members per cluster.
std::vector<std::vector<std::size_t>> members_of(const Matrix& points, const Labels& labels) {
  if (labels.size() != points.rows())
    throw InvalidArgument("labels and points differ in length");
  const std::size_t k = cluster_count(labels);
  if (k < 2) throw InvalidArgument("validity indices need at least 2 clusters");
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  for (std::size_t c = 0; c < k; ++c)
    if (members[c].empty())
      throw InvalidArgument("cluster " + std::to_string(c) + " is empty");
  return members;
}

struct Centers {
  Matrix dirs;
  std::vector<bool> zero;
};

Centers update_centers(const UnitPoints& up, const Labels& labels, std::size_t k) {
  const std::size_t r = up.unit.cols();
  Centers c{Matrix(k, r), std::vector<bool>(k, false)};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto dst = c.dirs.row(labels[i]);
    auto src = up.unit.row(i);
    for (std::size_t j = 0; j < r; ++j) dst[j] += src[j];
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto row = c.dirs.row(j);
    const double n = norm2(row);
    if (n == 0.0) {
      c.zero[j] = true;
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      for (double& v : row) v /= n;
    }
  }
  return c;
}

struct RestartOutcome {
  Labels labels;
  Centers centers;
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trace;
  std::size_t increases = 0;
};

bool increased(double prev, double next) {
  return next > prev + 1e-12 * std::max(1.0, std::fabs(prev));
}

RestartOutcome run_restart(const UnitPoints& up, const ClusteringConfig& cfg,
                           std::size_t restart) {
  const std::size_t m = up.unit.rows();
  const std::size_t k = cfg.k;
  const std::size_t r = up.unit.cols();

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);

  // Farthest-point seeding under cosine distance.
  Centers centers{Matrix(k, r), std::vector<bool>(k, false)};
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng() % m);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      pick = 0;
      for (std::size_t i = 1; i < m; ++i)
        if (nearest[i] > nearest[pick]) pick = i;
    }
    auto dst = centers.dirs.row(c);
    auto src = up.unit.row(pick);
    std::copy(src.begin(), src.end(), dst.begin());
    centers.zero[c] = up.zero[pick];
    for (std::size_t i = 0; i < m; ++i)
      nearest[i] = std::min(nearest[i], unit_distance(up.unit.row(i), up.zero[i],
                                                      centers.dirs.row(c), centers.zero[c]));
  }

  RestartOutcome out;
  out.labels.assign(m, 0);
  Labels previous;
  std::vector<double> dist(m, 0.0);

  auto assign = [&] {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d =
            unit_distance(up.unit.row(i), up.zero[i], centers.dirs.row(c), centers.zero[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out.labels[i] = best;
      dist[i] = best_d;
      ++sizes[best];
    }
    // Empty-cluster repair: the worst-fitting point of a multi-member cluster
    // becomes the singleton center of the empty one.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t worst = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (sizes[out.labels[i]] < 2) continue;
        if (worst == m || dist[i] > dist[worst]) worst = i;
      }
      if (worst == m) throw Error("kmeans: cannot repair empty cluster");
      --sizes[out.labels[worst]];
      out.labels[worst] = c;
      ++sizes[c];
      dist[worst] = 0.0;
      auto src = up.unit.row(worst);
      auto dst = centers.dirs.row(c);
      std::copy(src.begin(), src.end(), dst.begin());
      centers.zero[c] = up.zero[worst];
    }
    double inertia = 0.0;
    for (double d : dist) inertia += d;
    return inertia;
  };

  auto record = [&](double inertia) {
    if (!out.trace.empty() && increased(out.trace.back(), inertia)) ++out.increases;
    out.trace.push_back(inertia);
  };

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    record(assign());
    out.iterations = it + 1;
    if (it > 0 && out.labels == previous) break;
    previous = out.labels;
    Centers next = update_centers(up, out.labels, k);
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < r; ++j) {
        const double d = next.dirs(c, j) - centers.dirs(c, j);
        s += d * d;
      }
      movement = std::max(movement, std::sqrt(s));
    }
    centers = std::move(next);
    if (movement < cfg.tol) break;
  }

  out.centers = update_centers(up, out.labels, k);
  double inertia = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    inertia += unit_distance(up.unit.row(i), up.zero[i], out.centers.dirs.row(out.labels[i]),
                             out.centers.zero[out.labels[i]]);
  record(inertia);
  out.inertia = inertia;
  return out;
}

}  // namespace

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine_distance: length mismatch");
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return (na == 0.0 && nb == 0.0) ? 0.0 : 1.0;
  if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;
  return std::clamp(1.0 - dot(a, b) / (na * nb), 0.0, 2.0);
}

Matrix cluster_centers(const Matrix& points, const Labels& labels, std::size_t k) {
  if (labels.size() != points.rows()) throw InvalidArgument("labels and points differ in length");
  return update_centers(normalize_rows(points), labels, k).dirs;
}

ClusterResult kmeans(const Matrix& points, const ClusteringConfig& config) {
  if (config.k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (config.n_restarts < 1) throw InvalidArgument("kmeans: n_restarts must be >= 1");
  if (points.cols() < 1) throw InvalidArgument("kmeans: points need at least one dimension");
  if (points.rows() < config.k)
    throw InvalidArgument("kmeans: " + std::to_string(points.rows()) + " points cannot form " +
                          std::to_string(config.k) + " clusters");
  if (!all_finite(points)) throw InvalidArgument("kmeans: non-finite coordinates");

  const UnitPoints up = normalize_rows(points);
  if (std::all_of(up.zero.begin(), up.zero.end(), [](bool z) { return z; }))
    throw InvalidArgument("kmeans: every point is the zero vector");

  std::vector<RestartOutcome> outcomes(config.n_restarts);
  parallel_for(config.n_restarts, config.threads,
               [&](std::size_t i) { outcomes[i] = run_restart(up, config, i); });

  std::size_t best = 0;
  std::size_t increases = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    increases += outcomes[i].increases;
    if (outcomes[i].inertia < outcomes[best].inertia) best = i;
  }

  ClusterResult result;
  result.labels = std::move(outcomes[best].labels);
  result.centers = std::move(outcomes[best].centers.dirs);
  result.inertia = outcomes[best].inertia;
  result.iterations_run = outcomes[best].iterations;
  result.restart_chosen = best;
  result.inertia_trace = std::move(outcomes[best].trace);
  result.inertia_increases = increases;
  return result;
}

double dunn_index(const Matrix& points, const Labels& labels) {
  const auto members = members_of(points, labels);
  const std::size_t m = points.rows();
  double max_diameter = 0.0;
  double min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = cosine_distance(points.row(i), points.row(j));
      if (labels[i] == labels[j])
        max_diameter = std::max(max_diameter, d);
      else
        min_separation = std::min(min_separation, d);
    }
  }
  if (max_diameter == 0.0) return min_separation > 0.0 ? kDunnInfinite : 0.0;
  return min_separation / max_diameter;
}

double davies_bouldin(const Matrix& points, const Labels& labels) {
  const auto members = members_of(points, labels);
  const std::size_t k = members.size();
  const Matrix centers = cluster_centers(points, labels, k);

  std::vector<double> scatter(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i : members[c]) scatter[c] += cosine_distance(points.row(i), centers.row(c));
    scatter[c] /= static_cast<double>(members[c].size());
  }

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double d = cosine_distance(centers.row(i), centers.row(j));
      if (d == 0.0)
        throw InvalidArgument("davies_bouldin: centers of clusters " + std::to_string(i) +
                              " and " + std::to_string(j) + " coincide");
      worst = std::max(worst, (scatter[i] + scatter[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

double silhouette(const Matrix& points, const Labels& labels) {
  const auto members = members_of(points, labels);
  const std::size_t m = points.rows();
  const std::size_t k = members.size();

  Matrix dist(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      dist(i, j) = dist(j, i) = cosine_distance(points.row(i), points.row(j));

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t own = labels[i];
    if (members[own].size() < 2) continue;  // singleton scores 0
    std::vector<double> mean_to(k, 0.0);
    for (std::size_t j = 0; j < m; ++j) mean_to[labels[j]] += dist(i, j);
    const double a = mean_to[own] / static_cast<double>(members[own].size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, mean_to[c] / static_cast<double>(members[c].size()));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(m);
}

KSelection select_k(const Matrix& points, std::size_t k_min, std::size_t k_max,
                    const ClusteringConfig& config) {
  if (k_min < 2 || k_max < k_min)
    throw InvalidArgument("select_k: k range must satisfy 2 <= k_min <= k_max");
  if (points.rows() < 2 || k_max > points.rows() - 1)
    throw InvalidArgument("select_k: k_max must not exceed m - 1 = " +
                          std::to_string(points.rows() - 1));

  const std::size_t count = k_max - k_min + 1;
  KSelection sel;
  sel.scores.resize(count);
  sel.results.resize(count);
  parallel_for(count, config.threads, [&](std::size_t i) {
    ClusteringConfig cfg = config;
    cfg.k = k_min + i;
    cfg.threads = 1;
    sel.results[i] = kmeans(points, cfg);
    const auto& labels = sel.results[i].labels;
    sel.scores[i] = {cfg.k, dunn_index(points, labels), davies_bouldin(points, labels),
                     silhouette(points, labels)};
  });

  std::size_t dunn_best = 0, dbi_best = 0, sil_best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (sel.scores[i].dunn > sel.scores[dunn_best].dunn) dunn_best = i;
    if (sel.scores[i].davies_bouldin < sel.scores[dbi_best].davies_bouldin) dbi_best = i;
    if (sel.scores[i].silhouette > sel.scores[sil_best].silhouette) sil_best = i;
  }
  std::vector<int> votes(count, 0);
  ++votes[dunn_best];
  ++votes[dbi_best];
  ++votes[sil_best];
  std::size_t winner = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (votes[i] > votes[winner]) winner = i;
  sel.recommended = k_min + winner;
  return sel;
}

Matrix characterize_clusters(const ClusterResult& result, const Matrix& ttd_coords) {
  if (ttd_coords.cols() != result.centers.cols())
    throw InvalidArgument("characterize_clusters: embedding rank mismatch");
  Matrix sim(result.centers.rows(), ttd_coords.rows());
  for (std::size_t c = 0; c < sim.rows(); ++c)
    for (std::size_t t = 0; t < sim.cols(); ++t)
      sim(c, t) = 1.0 - cosine_distance(result.centers.row(c), ttd_coords.row(t));
  return sim;
}

double adjusted_rand_index(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw InvalidArgument("adjusted_rand_index: length mismatch");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, v] : table) index += pairs(v);
  for (const auto& [key, v] : rows) sum_a += pairs(v);
  for (const auto& [key, v] : cols) sum_b += pairs(v);
  const double expected = sum_a * sum_b / pairs(n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace urbanlra
