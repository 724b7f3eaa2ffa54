#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "urbanlra/lra.hpp"
#include "urbanlra/rttd.hpp"

using namespace urbanlra;

namespace {

CheckInRecord at(double x, double y, const std::string& ts, const std::string& tag) {
  CheckInRecord r;
  r.user_id = "u";
  r.timestamp_text = ts;
  r.timestamp = *parse_timestamp(ts);
  r.x = x;
  r.y = y;
  r.demand_tag = tag;
  return r;
}

GridSpec grid_3x3() {
  GridSpec g;
  g.cell_size = 1000;
  g.n_cols = 3;
  g.n_rows = 3;
  g.validate();
  return g;
}

}  // namespace

TEST(TtdLayout, DeclaredColumns) {
  EXPECT_EQ(kTtdCount, 144u);
  EXPECT_EQ(ttd_index(DemandCategory::H, 0), 0u);
  EXPECT_EQ(ttd_index(DemandCategory::Tr, 0), 24u);
  EXPECT_EQ(ttd_index(DemandCategory::O, 23), 143u);
  for (std::size_t c = 0; c < kTtdCount; ++c) {
    const auto t = ttd_from_column(c);
    EXPECT_EQ(ttd_index(t.demand, t.hour), c);
  }
  EXPECT_EQ(ttd_label(ttd_index(DemandCategory::Tr, 7)), "Tr07");
  EXPECT_EQ(ttd_label(143), "O23");
}

TEST(BuildMatrix, EmptyRecordsGiveZeroMatrix) {
  const auto b = build_matrix({}, grid_3x3(), CategoryMap::standard());
  EXPECT_EQ(b.matrix.regions(), 9u);
  EXPECT_EQ(b.matrix.values.cols(), 144u);
  EXPECT_EQ(b.matrix.total(), 0.0);
  EXPECT_EQ(b.report.empty_regions.size(), 9u);
}

TEST(BuildMatrix, HandCountedFixture) {
  // Region 5 is column 2, row 1 of the 3x3 grid.
  std::vector<CheckInRecord> rs{at(2500, 1500, "2012-03-01T12:10:00+08:00", "dining"),
                                at(2100, 1900, "2012-03-01T12:50:00+08:00", "dining"),
                                at(2500, 1500, "2012-03-01T13:00:00+08:00", "dining")};
  const auto b = build_matrix(rs, grid_3x3(), CategoryMap::standard());
  const auto& v = b.matrix.values;
  EXPECT_EQ(v(5, ttd_index(DemandCategory::D, 12)), 2.0);
  EXPECT_EQ(v(5, ttd_index(DemandCategory::D, 13)), 1.0);
  EXPECT_EQ(b.matrix.total(), 3.0);
  EXPECT_EQ(b.report.accepted, 3u);

  const Matrix p = demand_profiles(v);
  EXPECT_EQ(p.rows(), 6u);
  EXPECT_EQ(p.cols(), 24u);
  EXPECT_EQ(p(ordinal(DemandCategory::D), 12), 2.0);
  EXPECT_EQ(p(ordinal(DemandCategory::D), 13), 1.0);
  double sum = 0.0;
  for (double x : p.data()) sum += x;
  EXPECT_EQ(sum, 3.0);
}

TEST(BuildMatrix, OutsideMaskedAndDroppedAreReported) {
  auto g = grid_3x3();
  g.active_mask = std::vector<std::size_t>{0, 4};
  g.validate();
  CategoryMap map = CategoryMap::standard();
  map.set_policy(UnmatchedPolicy::Drop);
  std::vector<CheckInRecord> rs{at(500, 500, "2012-03-01T08:00:00Z", "work"),
                                at(1500, 1500, "2012-03-01T09:00:00Z", "karaoke"),
                                at(2500, 2500, "2012-03-01T09:00:00Z", "home"),
                                at(-1, 0, "2012-03-01T09:00:00Z", "home")};
  const auto b = build_matrix(rs, g, map);
  EXPECT_EQ(b.matrix.regions(), 2u);
  EXPECT_EQ(b.matrix.region_ids, (std::vector<std::size_t>{0, 4}));
  EXPECT_EQ(b.report.accepted, 1u);
  EXPECT_EQ(b.report.outside, 2u);
  EXPECT_EQ(b.report.dropped_tag, 1u);
  EXPECT_EQ(b.report.empty_regions, (std::vector<std::size_t>{4}));
  EXPECT_EQ(b.matrix.values(0, ttd_index(DemandCategory::W, 8)), 1.0);
}

TEST(BuildMatrix, ConservesCountsAndIgnoresOrder) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-200.0, 3200.0);
  std::uniform_int_distribution<int> hour(0, 23);
  const char* tags[] = {"home", "transportation", "work", "dining", "entertainment", "other", "karaoke"};
  std::vector<CheckInRecord> rs;
  for (int i = 0; i < 500; ++i) {
    char ts[40];
    std::snprintf(ts, sizeof ts, "2012-03-01T%02d:15:00+08:00", hour(rng));
    rs.push_back(at(pos(rng), pos(rng), ts, tags[i % 7]));
  }
  const auto b1 = build_matrix(rs, grid_3x3(), CategoryMap::standard());
  EXPECT_EQ(b1.matrix.total(), static_cast<double>(b1.report.accepted));
  EXPECT_EQ(b1.report.accepted + b1.report.outside, rs.size());
  std::shuffle(rs.begin(), rs.end(), rng);
  const auto b2 = build_matrix(rs, grid_3x3(), CategoryMap::standard());
  EXPECT_EQ(b1.matrix.values, b2.matrix.values);
  const Matrix profiles = demand_profiles(b1.matrix.values);
  double psum = 0.0;
  for (double x : profiles.data()) psum += x;
  EXPECT_EQ(psum, static_cast<double>(b1.report.accepted));
}

TEST(DemandProfiles, ZeroMatrix) {
  const Matrix p = demand_profiles(Matrix(4, 144));
  for (double x : p.data()) EXPECT_EQ(x, 0.0);
  EXPECT_THROW(demand_profiles(Matrix(4, 10)), InvalidArgument);
}

TEST(DemandProfiles, ResidualShrinksWithRank) {
  std::mt19937_64 rng(6);
  std::poisson_distribution<int> pois(4.0);
  Matrix m(40, 144);
  for (double& v : m.data()) v = pois(rng);
  const auto scan = rank_scan(m, 40, true);
  EXPECT_LT(*scan.rows.back().profile_residual, 1e-6 * *scan.rows.front().profile_residual);
  const auto f = svd(m);
  EXPECT_LT(*rank_scan(m, f, f.S.size(), true).rows.back().profile_residual, 1e-8 * frobenius_norm(m));
}
