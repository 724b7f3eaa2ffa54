#include "urbanlra/ustas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urbanlra/error.hpp"
#include "urbanlra/rttd.hpp"

namespace urbanlra {

std::vector<Ustas> extract_ustas(const TruncatedLra& t) {
  std::vector<Ustas> out;
  out.reserve(t.rank());
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (!(t.S[k] > 0.0))
      throw InvalidArgument("extract_ustas: singular value " + std::to_string(k + 1) +
                            " is zero, structure undefined");
    Ustas u;
    u.index = k + 1;
    u.sigma = t.S[k];
    u.spatial = t.U.column(k);
    u.temporal = t.V.column(k);
    out.push_back(std::move(u));
  }
  return out;
}

JointEmbedding joint_embedding(const TruncatedLra& t) {
  JointEmbedding e{t.U, t.V};
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (t.S[k] < 0.0) throw InvalidArgument("joint_embedding: negative singular value");
    const double w = std::sqrt(t.S[k]);
    for (std::size_t i = 0; i < e.region_coords.rows(); ++i) e.region_coords(i, k) *= w;
    for (std::size_t i = 0; i < e.ttd_coords.rows(); ++i) e.ttd_coords(i, k) *= w;
  }
  return e;
}

std::vector<UstasSummary> ustas_report(const std::vector<Ustas>& structures, std::size_t top_k) {
  if (top_k < 1) throw InvalidArgument("ustas_report: top_k must be >= 1");
  std::vector<UstasSummary> out;
  out.reserve(structures.size());
  for (const auto& s : structures) {
    if (s.temporal.size() != kTtdCount)
      throw InvalidArgument("ustas_report: temporal vector must have 144 entries");
    UstasSummary sum;
    sum.index = s.index;
    sum.sigma = s.sigma;

    std::vector<std::size_t> order(s.spatial.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::fabs(s.spatial[a]) > std::fabs(s.spatial[b]);
    });
    const std::size_t keep = std::min(top_k, order.size());
    for (std::size_t i = 0; i < keep; ++i)
      sum.top_regions.push_back({order[i], s.spatial[order[i]]});

    sum.temporal_table = Matrix(kDemandCount, kHoursPerDay);
    for (std::size_t c = 0; c < kTtdCount; ++c)
      sum.temporal_table(c / kHoursPerDay, c % kHoursPerDay) = s.temporal[c];
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace urbanlra
