#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "urbanlra/error.hpp"
#include "urbanlra/ingest.hpp"

using namespace urbanlra;

namespace {

ParseResult parse(const std::string& text) {
  std::istringstream in(text);
  return parse_records(in);
}

CheckInRecord rec(std::string user, std::string ts, double x, double y, std::string tag = "dining") {
  CheckInRecord r;
  r.user_id = std::move(user);
  r.timestamp_text = ts;
  r.timestamp = *parse_timestamp(ts);
  r.x = x;
  r.y = y;
  r.demand_tag = std::move(tag);
  return r;
}

GridSpec grid_4x3() {
  GridSpec g;
  g.origin_x = 350000;
  g.origin_y = 3450000;
  g.cell_size = 1000;
  g.n_cols = 4;
  g.n_rows = 3;
  g.validate();
  return g;
}

}  // namespace

TEST(Demand, OrdinalsAndCodes) {
  EXPECT_EQ(ordinal(DemandCategory::H), 0u);
  EXPECT_EQ(ordinal(DemandCategory::Tr), 1u);
  EXPECT_EQ(ordinal(DemandCategory::O), 5u);
  for (auto d : kAllDemands) EXPECT_EQ(parse_demand_code(demand_code(d)), d);
  EXPECT_FALSE(parse_demand_code("X").has_value());
}

TEST(Timestamp, LocalHourUsesOwnOffset) {
  auto t = parse_timestamp("2012-03-01T12:30:00+08:00");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->local_hour, 12);
  EXPECT_EQ(t->utc_offset_minutes, 480);
  EXPECT_EQ(t->epoch_seconds, 1330576200);  // 2012-03-01T04:30:00Z

  auto z = parse_timestamp("2012-03-01T04:30:00Z");
  ASSERT_TRUE(z);
  EXPECT_EQ(z->epoch_seconds, t->epoch_seconds);
  EXPECT_EQ(z->local_hour, 4);

  auto neg = parse_timestamp("2011-12-31T23:59:59.250-05:30");
  ASSERT_TRUE(neg);
  EXPECT_EQ(neg->local_hour, 23);
  EXPECT_EQ(neg->utc_offset_minutes, -330);
}

TEST(Timestamp, RejectsMalformed) {
  for (const char* bad : {"", "2012-13-01T00:00:00Z", "2012-02-30T00:00:00Z",
                          "2012-03-01T24:00:00Z", "2012-03-01T12:30:00", "2012-03-01T12:30:00+8:00",
                          "2012-03-01T12:61:00Z"})
    EXPECT_FALSE(parse_timestamp(bad).has_value()) << bad;
  EXPECT_TRUE(parse_timestamp("2012-02-29T00:00:00Z").has_value());
  EXPECT_FALSE(parse_timestamp("2011-02-29T00:00:00Z").has_value());
  EXPECT_EQ(parse_timestamp("2012-03-01 12:30:00+08:00")->epoch_seconds, 1330576200);
}

TEST(ParseRecords, HeaderOnly) {
  auto r = parse("user_id,timestamp,x,y,demand_tag\n");
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.report.parsed, 0u);
  EXPECT_TRUE(r.report.skipped_lines.empty());
}

TEST(ParseRecords, OneRow) {
  auto r = parse("user_id,timestamp,x,y,demand_tag\nu1,2012-03-01T12:30:00+08:00,354000.0,3456000.0,dining\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].user_id, "u1");
  EXPECT_EQ(r.records[0].demand_tag, "dining");
  EXPECT_EQ(r.records[0].x, 354000.0);
  EXPECT_EQ(r.records[0].timestamp.local_hour, 12);
}

TEST(ParseRecords, MalformedRowSkippedWithLineNumber) {
  auto r = parse(
      "user_id,timestamp,x,y,demand_tag\n"
      "u1,2012-03-01T12:30:00+08:00,354000.0,3456000.0,dining\n"
      "u2,2012-03-01T12:31:00+08:00,east,3456000.0,work\n"
      "u3,2012-03-01T12:32:00+08:00,354100.0,3456100.0,home\r\n");
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.report.skipped_lines.size(), 1u);
  EXPECT_EQ(r.report.skipped_lines[0], 3u);
  EXPECT_EQ(r.records[1].demand_tag, "home");
}

TEST(ParseRecords, WrongFieldCountAndBadTimestampSkipped) {
  auto r = parse(
      "user_id,timestamp,x,y,demand_tag\n"
      "u1,2012-03-01T12:30:00+08:00,1,2\n"
      "u1,yesterday,1,2,home\n"
      "u1,2012-03-01T12:30:00+08:00,1,inf,home\n");
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.report.skipped_lines, (std::vector<std::size_t>{2, 3, 4}));
}

TEST(ParseRecords, HeaderMismatchIsSchemaError) {
  EXPECT_THROW(parse("user,timestamp,x,y,tag\n"), SchemaError);
  EXPECT_THROW(parse(""), SchemaError);
}

TEST(ParseRecords, WriteThenParseRoundTrips) {
  std::vector<CheckInRecord> in{rec("a,b", "2012-03-01T12:30:00+08:00", 0.1, 1e6 / 3.0, "coffee shop"),
                                rec("u2", "2012-03-02T01:00:00Z", -5, 7, "home")};
  std::ostringstream out;
  write_records(out, in);
  auto back = parse(out.str());
  ASSERT_EQ(back.records.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.records[i].user_id, in[i].user_id);
    EXPECT_EQ(back.records[i].x, in[i].x);
    EXPECT_EQ(back.records[i].y, in[i].y);
    EXPECT_EQ(back.records[i].timestamp.epoch_seconds, in[i].timestamp.epoch_seconds);
    EXPECT_EQ(back.records[i].demand_tag, in[i].demand_tag);
  }
}

TEST(CategoryMapping, PoliciesAndNormalization) {
  CategoryMap map;
  map.add("dining", DemandCategory::D);
  EXPECT_EQ(map_demand("dining", map), DemandCategory::D);
  EXPECT_EQ(map_demand("  Dining ", map), DemandCategory::D);
  EXPECT_EQ(map_demand("karaoke", map), DemandCategory::O);
  map.set_policy(UnmatchedPolicy::Drop);
  EXPECT_FALSE(map_demand("karaoke", map).has_value());
}

TEST(CategoryMapping, StandardCoversAllCategories) {
  const auto map = CategoryMap::standard();
  std::vector<DemandCategory> seen;
  for (const auto& [tag, d] : map.tags()) seen.push_back(d);
  for (auto d : kAllDemands) EXPECT_NE(std::find(seen.begin(), seen.end(), d), seen.end());
  EXPECT_EQ(map_demand("Tr", map), DemandCategory::Tr);
  EXPECT_EQ(map_demand("transportation", map), DemandCategory::Tr);
}

TEST(Grid, AssignRegionExamples) {
  const auto g = grid_4x3();
  EXPECT_EQ(assign_region(g.origin_x, g.origin_y, g), 0u);
  EXPECT_EQ(assign_region(g.origin_x + 1500, g.origin_y + 2500, g), 9u);
  EXPECT_FALSE(assign_region(g.origin_x - 1, g.origin_y, g).has_value());
}

TEST(Grid, HalfOpenEdges) {
  const auto g = grid_4x3();
  EXPECT_EQ(assign_region(g.origin_x + 1000, g.origin_y, g), 1u);
  EXPECT_EQ(assign_region(g.origin_x, g.origin_y + 1000, g), 4u);
  EXPECT_FALSE(assign_region(g.origin_x + 4000, g.origin_y, g).has_value());
  EXPECT_FALSE(assign_region(g.origin_x, g.origin_y + 3000, g).has_value());
  EXPECT_EQ(assign_region(g.origin_x + 3999.999, g.origin_y + 2999.999, g), 11u);
}

TEST(Grid, CellCentersMapBack) {
  const auto g = grid_4x3();
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    const auto [x, y] = g.cell_center(k);
    EXPECT_EQ(assign_region(x, y, g), k);
  }
}

TEST(Grid, MaskExcludesCells) {
  auto g = grid_4x3();
  g.active_mask = std::vector<std::size_t>{9, 2, 2};
  g.validate();
  EXPECT_EQ(*g.active_mask, (std::vector<std::size_t>{2, 9}));
  EXPECT_EQ(g.active_regions(), (std::vector<std::size_t>{2, 9}));
  EXPECT_EQ(assign_region(g.origin_x + 1500, g.origin_y + 2500, g), 9u);
  EXPECT_FALSE(assign_region(g.origin_x, g.origin_y, g).has_value());
}

TEST(Grid, ValidateRejectsBadSpecs) {
  auto g = grid_4x3();
  g.cell_size = 0;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = grid_4x3();
  g.n_rows = 0;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = grid_4x3();
  g.active_mask = std::vector<std::size_t>{12};
  EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(Dedup, ExactDuplicate) {
  const auto r = rec("u", "2012-03-01T12:30:00+08:00", 1, 2);
  auto out = dedup_filter({r, r});
  EXPECT_EQ(out.records.size(), 1u);
  EXPECT_EQ(out.dropped, 1u);
}

TEST(Dedup, GapRule) {
  auto same = dedup_filter({rec("u", "2012-03-01T12:30:00Z", 1, 2), rec("u", "2012-03-01T12:30:30Z", 1, 2)}, 60);
  EXPECT_EQ(same.records.size(), 1u);
  auto moved = dedup_filter({rec("u", "2012-03-01T12:30:00Z", 1, 2), rec("u", "2012-03-01T12:30:30Z", 1, 3)}, 60);
  EXPECT_EQ(moved.records.size(), 2u);
  auto other_user =
      dedup_filter({rec("u", "2012-03-01T12:30:00Z", 1, 2), rec("v", "2012-03-01T12:30:30Z", 1, 2)}, 60);
  EXPECT_EQ(other_user.records.size(), 2u);
  auto far_apart = dedup_filter({rec("u", "2012-03-01T12:30:00Z", 1, 2), rec("u", "2012-03-01T12:31:00Z", 1, 2)}, 60);
  EXPECT_EQ(far_apart.records.size(), 2u);
}

TEST(Dedup, GapMeasuredFromLastRetained) {
  // 0 s kept, 40 s dropped, 80 s kept (80 s after the retained one).
  auto out = dedup_filter({rec("u", "2012-03-01T12:30:00Z", 1, 2), rec("u", "2012-03-01T12:30:40Z", 1, 2),
                           rec("u", "2012-03-01T12:31:20Z", 1, 2)},
                          60);
  ASSERT_EQ(out.records.size(), 2u);
  EXPECT_EQ(out.records[1].timestamp_text, "2012-03-01T12:31:20Z");
}

TEST(Dedup, Idempotent) {
  std::vector<CheckInRecord> rs;
  for (int i = 0; i < 40; ++i) {
    char ts[32];
    std::snprintf(ts, sizeof ts, "2012-03-01T12:%02d:%02dZ", i / 3, (i * 17) % 60);
    rs.push_back(rec("u" + std::to_string(i % 4), ts, i % 3, 0));
  }
  rs.push_back(rs[5]);
  const auto once = dedup_filter(rs);
  const auto twice = dedup_filter(once.records);
  EXPECT_EQ(twice.dropped, 0u);
  EXPECT_EQ(twice.records.size(), once.records.size());
}

TEST(Projection, EquirectangularKnownDistances) {
  const auto [x0, y0] = equirectangular_project(121.47, 31.23, 121.47, 31.23);
  EXPECT_EQ(x0, 0.0);
  EXPECT_EQ(y0, 0.0);
  // One degree of latitude on a 6371008.8 m sphere.
  const auto [x1, y1] = equirectangular_project(121.47, 32.23, 121.47, 31.23);
  EXPECT_NEAR(y1, 111195.08, 0.01);
  EXPECT_NEAR(x1, 0.0, 1e-9);
  const auto [x2, y2] = equirectangular_project(122.47, 31.23, 121.47, 31.23);
  EXPECT_NEAR(x2, 111195.08 * std::cos(31.23 * 3.14159265358979323846 / 180.0), 0.01);
  EXPECT_NEAR(y2, 0.0, 1e-9);
}
