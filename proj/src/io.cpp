#include "urbanlra/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "urbanlra/error.hpp"
#include "urbanlra/textio.hpp"

namespace urbanlra::io {

using nlohmann::json;

namespace {

json load_json(const fs::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
}

void save_json(const fs::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

template <typename T>
T get_field(const json& j, const char* key, const fs::path& path) {
  if (!j.contains(key)) throw SchemaError(path.string() + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": bad value for '" + key + "': " + e.what());
  }
}

void expect_header(const CsvTable& t, const std::vector<std::string>& want, const fs::path& path) {
  if (t.header != want) {
    std::string got;
    for (std::size_t i = 0; i < t.header.size(); ++i) got += (i ? "," : "") + t.header[i];
    throw SchemaError(path.string() + ": unexpected header '" + got + "'");
  }
}

[[noreturn]] void bad_row(const fs::path& path, std::size_t line, const std::string& why) {
  throw SchemaError(path.string() + ":" + std::to_string(line) + ": " + why);
}

double cell_double(const CsvTable& t, std::size_t row, std::size_t col, const fs::path& path) {
  double v = 0.0;
  if (col >= t.rows[row].size() || !parse_double(t.rows[row][col], v))
    bad_row(path, t.line_numbers[row], "column " + std::to_string(col + 1) + " is not a number");
  return v;
}

std::size_t cell_size_t(const CsvTable& t, std::size_t row, std::size_t col, const fs::path& path) {
  std::size_t v = 0;
  if (col >= t.rows[row].size() || !parse_size(t.rows[row][col], v))
    bad_row(path, t.line_numbers[row],
            "column " + std::to_string(col + 1) + " is not a nonnegative integer");
  return v;
}

void check_width(const CsvTable& t, std::size_t width, const fs::path& path) {
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.rows[r].size() != width)
      bad_row(path, t.line_numbers[r],
              "expected " + std::to_string(width) + " fields, got " +
                  std::to_string(t.rows[r].size()));
}

std::vector<std::string> numbered_header(const std::string& first, const std::string& prefix,
                                         std::size_t count) {
  std::vector<std::string> h{first};
  for (std::size_t i = 1; i <= count; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

// Header "<first>,<prefix>1..<prefix>N" with N inferred.
std::size_t numbered_width(const CsvTable& t, const std::string& first, const std::string& prefix,
                           const fs::path& path) {
  if (t.header.empty() || t.header[0] != first)
    throw SchemaError(path.string() + ": header must start with '" + first + "'");
  const std::size_t count = t.header.size() - 1;
  expect_header(t, numbered_header(first, prefix, count), path);
  return count;
}

void write_row(std::ostream& out, std::string_view key, std::span<const double> values) {
  out << key;
  for (double v : values) out << ',' << format_double(v);
  out << '\n';
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::string> ttd_labels() {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < kTtdCount; ++c) out.push_back(ttd_label(c));
  return out;
}

std::vector<std::size_t> read_increasing_ids(const CsvTable& t, const fs::path& path) {
  std::vector<std::size_t> ids;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ids.push_back(cell_size_t(t, r, 0, path));
    if (r > 0 && ids[r] <= ids[r - 1])
      bad_row(path, t.line_numbers[r], "region_id values must be strictly increasing");
  }
  return ids;
}

}  // namespace

GridSpec read_grid(const fs::path& path) {
  const json j = load_json(path);
  GridSpec g;
  g.origin_x = get_field<double>(j, "origin_x", path);
  g.origin_y = get_field<double>(j, "origin_y", path);
  g.cell_size = get_field<double>(j, "cell_size", path);
  g.n_cols = get_field<std::size_t>(j, "n_cols", path);
  g.n_rows = get_field<std::size_t>(j, "n_rows", path);
  if (j.contains("active_mask") && !j.at("active_mask").is_null())
    g.active_mask = get_field<std::vector<std::size_t>>(j, "active_mask", path);
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return g;
}

void write_grid(const fs::path& path, const GridSpec& grid) {
  json j;
  j["origin_x"] = grid.origin_x;
  j["origin_y"] = grid.origin_y;
  j["cell_size"] = grid.cell_size;
  j["n_cols"] = grid.n_cols;
  j["n_rows"] = grid.n_rows;
  j["active_mask"] = grid.active_mask ? json(*grid.active_mask) : json(nullptr);
  save_json(path, j);
}

CategoryMap read_category_map(const fs::path& path) {
  const json j = load_json(path);
  const auto tags = get_field<std::map<std::string, std::string>>(j, "tags", path);
  const std::string unmatched = j.contains("unmatched") ? get_field<std::string>(j, "unmatched", path)
                                                        : std::string("other");
  CategoryMap map;
  if (unmatched == "other")
    map.set_policy(UnmatchedPolicy::MapToOther);
  else if (unmatched == "drop")
    map.set_policy(UnmatchedPolicy::Drop);
  else
    throw SchemaError(path.string() + ": 'unmatched' must be \"other\" or \"drop\"");
  for (const auto& [tag, code] : tags) {
    const auto d = parse_demand_code(code);
    if (!d) throw SchemaError(path.string() + ": unknown category '" + code + "' for tag '" + tag + "'");
    map.add(tag, *d);
  }
  return map;
}

void write_category_map(const fs::path& path, const CategoryMap& map) {
  json tags = json::object();
  for (const auto& [tag, d] : map.tags()) tags[tag] = std::string(demand_code(d));
  json j;
  j["tags"] = tags;
  j["unmatched"] = map.policy() == UnmatchedPolicy::Drop ? "drop" : "other";
  save_json(path, j);
}

SynthSpec read_synth_spec(const fs::path& path) {
  const json j = load_json(path);
  SynthSpec spec;
  if (!j.contains("grid")) throw SchemaError(path.string() + ": missing key 'grid'");
  const json& g = j.at("grid");
  spec.grid.origin_x = get_field<double>(g, "origin_x", path);
  spec.grid.origin_y = get_field<double>(g, "origin_y", path);
  spec.grid.cell_size = get_field<double>(g, "cell_size", path);
  spec.grid.n_cols = get_field<std::size_t>(g, "n_cols", path);
  spec.grid.n_rows = get_field<std::size_t>(g, "n_rows", path);
  if (j.contains("center") && !j.at("center").is_null()) {
    const auto c = get_field<std::vector<double>>(j, "center", path);
    if (c.size() != 2) throw SchemaError(path.string() + ": 'center' must be [x, y]");
    spec.center_x = c[0];
    spec.center_y = c[1];
  }
  spec.cells_per_archetype = get_field<std::size_t>(j, "cells_per_archetype", path);
  spec.mean_checkins_per_cell = get_field<double>(j, "mean_checkins_per_cell", path);
  spec.mixing_noise = get_field<double>(j, "mixing_noise", path);
  spec.poisson = get_field<bool>(j, "poisson", path);
  spec.seed = get_field<std::uint64_t>(j, "seed", path);
  if (j.contains("emit_checkins")) spec.emit_checkins = get_field<bool>(j, "emit_checkins", path);

  if (!j.contains("archetypes") || !j.at("archetypes").is_array())
    throw SchemaError(path.string() + ": 'archetypes' must be an array");
  for (const json& a : j.at("archetypes")) {
    Archetype arch;
    arch.name = get_field<std::string>(a, "name", path);
    const auto band = get_field<std::vector<double>>(a, "band_km", path);
    if (band.size() != 2) throw SchemaError(path.string() + ": 'band_km' must be [inner, outer]");
    arch.inner_km = band[0];
    arch.outer_km = band[1];
    try {
      if (a.contains("profile")) {
        const auto rows = get_field<std::vector<std::vector<double>>>(a, "profile", path);
        if (rows.size() != kDemandCount)
          throw SchemaError(path.string() + ": profile of '" + arch.name + "' needs 6 rows");
        arch.profile = Matrix(kDemandCount, kHoursPerDay);
        double total = 0.0;
        for (std::size_t d = 0; d < kDemandCount; ++d) {
          if (rows[d].size() != kHoursPerDay)
            throw SchemaError(path.string() + ": profile rows of '" + arch.name + "' need 24 values");
          for (std::size_t t = 0; t < kHoursPerDay; ++t) {
            arch.profile(d, t) = rows[d][t];
            total += rows[d][t];
          }
        }
        if (!(total > 0.0)) throw SchemaError(path.string() + ": profile of '" + arch.name + "' is zero");
        for (double& v : arch.profile.data()) v /= total;
      } else {
        const double floor = a.contains("floor") ? get_field<double>(a, "floor", path) : 0.0;
        std::vector<ProfileBlock> blocks;
        if (a.contains("blocks")) {
          for (const json& b : a.at("blocks")) {
            ProfileBlock blk;
            const auto code = get_field<std::string>(b, "demand", path);
            const auto d = parse_demand_code(code);
            if (!d) throw SchemaError(path.string() + ": unknown demand code '" + code + "'");
            blk.demand = *d;
            const auto hours = get_field<std::vector<int>>(b, "hours", path);
            if (hours.size() != 2) throw SchemaError(path.string() + ": 'hours' must be [from, to]");
            blk.from = hours[0];
            blk.to = hours[1];
            blk.weight = get_field<double>(b, "weight", path);
            blocks.push_back(blk);
          }
        }
        arch.profile = profile_from_blocks(floor, blocks);
      }
    } catch (const InvalidArgument& e) {
      throw SchemaError(path.string() + ": archetype '" + arch.name + "': " + e.what());
    }
    spec.archetypes.push_back(std::move(arch));
  }
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return spec;
}

void write_checkins(const fs::path& path, const std::vector<CheckInRecord>& records) {
  auto out = open_output(path);
  write_records(out, records);
  finish(out, path);
}

void write_matrix(const fs::path& path, const RttdMatrix& matrix) {
  auto out = open_output(path);
  out << "region_id";
  for (const auto& label : ttd_labels()) out << ',' << label;
  out << '\n';
  for (std::size_t r = 0; r < matrix.regions(); ++r)
    write_row(out, std::to_string(matrix.region_ids[r]), matrix.values.row(r));
  finish(out, path);
}

RttdMatrix read_matrix(const fs::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<std::string> want{"region_id"};
  for (const auto& label : ttd_labels()) want.push_back(label);
  expect_header(t, want, path);
  check_width(t, want.size(), path);
  RttdMatrix m;
  m.region_ids = read_increasing_ids(t, path);
  m.values = Matrix(t.rows.size(), kTtdCount);
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < kTtdCount; ++c) {
      const double v = cell_double(t, r, c + 1, path);
      if (v < 0.0) bad_row(path, t.line_numbers[r], "counts must be nonnegative");
      m.values(r, c) = v;
    }
  return m;
}

void write_factors(const fs::path& dir, const SvdFactors& f,
                   const std::vector<std::size_t>& region_ids) {
  if (region_ids.size() != f.U.rows()) throw InvalidArgument("write_factors: region id count mismatch");
  const std::size_t p = f.S.size();
  {
    auto out = open_output(dir / "U.csv");
    const auto h = numbered_header("region_id", "u", p);
    for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
    out << '\n';
    for (std::size_t r = 0; r < f.U.rows(); ++r) write_row(out, std::to_string(region_ids[r]), f.U.row(r));
    finish(out, dir / "U.csv");
  }
  {
    auto out = open_output(dir / "S.csv");
    out << "index,sigma\n";
    for (std::size_t i = 0; i < p; ++i) out << (i + 1) << ',' << format_double(f.S[i]) << '\n';
    finish(out, dir / "S.csv");
  }
  {
    auto out = open_output(dir / "V.csv");
    const auto h = numbered_header("ttd", "v", p);
    for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
    out << '\n';
    const bool labelled = f.V.rows() == kTtdCount;
    for (std::size_t r = 0; r < f.V.rows(); ++r)
      write_row(out, labelled ? ttd_label(r) : std::to_string(r), f.V.row(r));
    finish(out, dir / "V.csv");
  }
}

FactorFiles read_factors(const fs::path& dir) {
  FactorFiles ff;
  const CsvTable u = read_csv(dir / "U.csv");
  const std::size_t p = numbered_width(u, "region_id", "u", dir / "U.csv");
  check_width(u, p + 1, dir / "U.csv");
  ff.region_ids = read_increasing_ids(u, dir / "U.csv");
  ff.factors.U = Matrix(u.rows.size(), p);
  for (std::size_t r = 0; r < u.rows.size(); ++r)
    for (std::size_t c = 0; c < p; ++c) ff.factors.U(r, c) = cell_double(u, r, c + 1, dir / "U.csv");

  const CsvTable s = read_csv(dir / "S.csv");
  expect_header(s, {"index", "sigma"}, dir / "S.csv");
  check_width(s, 2, dir / "S.csv");
  if (s.rows.size() != p) throw SchemaError((dir / "S.csv").string() + ": expected " + std::to_string(p) + " singular values");
  for (std::size_t r = 0; r < s.rows.size(); ++r) ff.factors.S.push_back(cell_double(s, r, 1, dir / "S.csv"));

  const CsvTable v = read_csv(dir / "V.csv");
  if (numbered_width(v, "ttd", "v", dir / "V.csv") != p)
    throw SchemaError((dir / "V.csv").string() + ": column count differs from U.csv");
  check_width(v, p + 1, dir / "V.csv");
  ff.factors.V = Matrix(v.rows.size(), p);
  for (std::size_t r = 0; r < v.rows.size(); ++r)
    for (std::size_t c = 0; c < p; ++c) ff.factors.V(r, c) = cell_double(v, r, c + 1, dir / "V.csv");
  return ff;
}

void write_rank_scan(const fs::path& path, const RankScanReport& report) {
  auto out = open_output(path);
  const bool profiles = !report.rows.empty() && report.rows.front().profile_residual.has_value();
  out << "r,error,energy" << (profiles ? ",profile_residual" : "") << '\n';
  for (const auto& row : report.rows) {
    out << row.r << ',' << format_double(row.error) << ',' << format_double(row.energy);
    if (profiles) out << ',' << format_double(row.profile_residual.value_or(0.0));
    out << '\n';
  }
  finish(out, path);
}

std::string ustas_heatmap_svg(const UstasSummary& summary) {
  constexpr int kCell = 20;
  constexpr int kLeft = 40;
  constexpr int kTop = 30;
  const Matrix& t = summary.temporal_table;
  double peak = 0.0;
  for (double v : t.data()) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) peak = 1.0;

  std::ostringstream svg;
  const int width = kLeft + 24 * kCell + 10;
  const int height = kTop + 6 * kCell + 30;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"15\">USTAS " << summary.index
      << " sigma=" << format_double(summary.sigma) << " (red positive, blue negative)</text>\n";
  for (std::size_t d = 0; d < kDemandCount; ++d) {
    svg << "<text x=\"4\" y=\"" << kTop + static_cast<int>(d) * kCell + 14 << "\">"
        << demand_code(kAllDemands[d]) << "</text>\n";
    for (std::size_t h = 0; h < kHoursPerDay; ++h) {
      const double v = t(d, h) / peak;
      const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::fabs(v))));
      char color[16];
      if (v >= 0)
        std::snprintf(color, sizeof color, "#ff%02x%02x", fade, fade);
      else
        std::snprintf(color, sizeof color, "#%02x%02xff", fade, fade);
      svg << "<rect x=\"" << kLeft + static_cast<int>(h) * kCell << "\" y=\""
          << kTop + static_cast<int>(d) * kCell << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"" << color << "\"><title>" << demand_code(kAllDemands[d]) << ' ' << h << ": "
          << format_double(t(d, h)) << "</title></rect>\n";
    }
  }
  for (std::size_t h = 0; h < kHoursPerDay; h += 3)
    svg << "<text x=\"" << kLeft + static_cast<int>(h) * kCell + 4 << "\" y=\""
        << kTop + 6 * kCell + 14 << "\">" << h << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_ustas(const fs::path& dir, const std::vector<Ustas>& structures,
                 const std::vector<std::size_t>& region_ids, bool svg) {
  const auto summaries = ustas_report(structures, 1);
  for (std::size_t i = 0; i < structures.size(); ++i) {
    const auto& s = structures[i];
    if (s.spatial.size() != region_ids.size())
      throw InvalidArgument("write_ustas: region id count mismatch");
    char name[32];
    std::snprintf(name, sizeof name, "ustas_%02zu", s.index);
    auto out = open_output(dir / (std::string(name) + ".csv"));
    out << "# signs: the largest-magnitude spatial loading of each structure is nonnegative\n";
    out << "section,key,hour,value\n";
    out << "sigma,,," << format_double(s.sigma) << '\n';
    for (std::size_t r = 0; r < s.spatial.size(); ++r)
      out << "spatial," << region_ids[r] << ",," << format_double(s.spatial[r]) << '\n';
    for (std::size_t c = 0; c < s.temporal.size(); ++c) {
      const auto ttd = ttd_from_column(c);
      out << "temporal," << demand_code(ttd.demand) << ',' << ttd.hour << ','
          << format_double(s.temporal[c]) << '\n';
    }
    finish(out, dir / (std::string(name) + ".csv"));
    if (svg) {
      auto sv = open_output(dir / (std::string(name) + ".svg"));
      sv << ustas_heatmap_svg(summaries[i]);
      finish(sv, dir / (std::string(name) + ".svg"));
    }
  }
}

void write_region_embedding(const fs::path& path, const Matrix& coords,
                            const std::vector<std::size_t>& region_ids) {
  if (region_ids.size() != coords.rows()) throw InvalidArgument("write_region_embedding: id count mismatch");
  auto out = open_output(path);
  const auto h = numbered_header("region_id", "c", coords.cols());
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (std::size_t r = 0; r < coords.rows(); ++r) write_row(out, std::to_string(region_ids[r]), coords.row(r));
  finish(out, path);
}

RegionEmbedding read_region_embedding(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t r = numbered_width(t, "region_id", "c", path);
  if (r == 0) throw SchemaError(path.string() + ": embedding has no coordinate columns");
  check_width(t, r + 1, path);
  RegionEmbedding e;
  e.region_ids = read_increasing_ids(t, path);
  e.coords = Matrix(t.rows.size(), r);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t c = 0; c < r; ++c) e.coords(i, c) = cell_double(t, i, c + 1, path);
  return e;
}

void write_ttd_embedding(const fs::path& path, const Matrix& coords) {
  auto out = open_output(path);
  const auto h = numbered_header("ttd", "c", coords.cols());
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (std::size_t r = 0; r < coords.rows(); ++r) write_row(out, ttd_label(r), coords.row(r));
  finish(out, path);
}

Matrix read_ttd_embedding(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t r = numbered_width(t, "ttd", "c", path);
  check_width(t, r + 1, path);
  if (t.rows.size() != kTtdCount)
    throw SchemaError(path.string() + ": expected 144 TTD rows, got " + std::to_string(t.rows.size()));
  Matrix m(kTtdCount, r);
  for (std::size_t i = 0; i < kTtdCount; ++i) {
    if (t.rows[i][0] != ttd_label(i))
      bad_row(path, t.line_numbers[i], "expected TTD label " + ttd_label(i));
    for (std::size_t c = 0; c < r; ++c) m(i, c) = cell_double(t, i, c + 1, path);
  }
  return m;
}

void write_clusters(const fs::path& path, const std::vector<std::size_t>& region_ids,
                    const Labels& labels) {
  if (region_ids.size() != labels.size()) throw InvalidArgument("write_clusters: length mismatch");
  auto out = open_output(path);
  out << "region_id,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << region_ids[i] << ',' << labels[i] << '\n';
  finish(out, path);
}

ClusterAssignment read_clusters(const fs::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"region_id", "cluster"}, path);
  check_width(t, 2, path);
  ClusterAssignment a;
  a.region_ids = read_increasing_ids(t, path);
  for (std::size_t r = 0; r < t.rows.size(); ++r) a.labels.push_back(cell_size_t(t, r, 1, path));
  return a;
}

void write_centers(const fs::path& path, const Matrix& centers) {
  auto out = open_output(path);
  const auto h = numbered_header("cluster", "c", centers.cols());
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (std::size_t r = 0; r < centers.rows(); ++r) write_row(out, std::to_string(r), centers.row(r));
  finish(out, path);
}

void write_validity(const fs::path& path, const std::vector<ValidityScores>& scores) {
  auto out = open_output(path);
  out << "k,dunn,dbi,silhouette\n";
  for (const auto& s : scores)
    out << s.k << ',' << (std::isinf(s.dunn) ? std::string("inf") : format_double(s.dunn)) << ','
        << format_double(s.davies_bouldin) << ',' << format_double(s.silhouette) << '\n';
  finish(out, path);
}

void write_characterization(const fs::path& path, const Matrix& similarity) {
  auto out = open_output(path);
  out << "cluster,demand,hour,similarity\n";
  for (std::size_t c = 0; c < similarity.rows(); ++c)
    for (std::size_t t = 0; t < similarity.cols(); ++t) {
      const auto ttd = ttd_from_column(t);
      out << c << ',' << demand_code(ttd.demand) << ',' << ttd.hour << ','
          << format_double(similarity(c, t)) << '\n';
    }
  finish(out, path);
}

void write_ellipse(const fs::path& path, const DeviationalEllipse& e) {
  json j;
  j["center_x"] = e.center_x;
  j["center_y"] = e.center_y;
  j["semi_major"] = e.semi_major;
  j["semi_minor"] = e.semi_minor;
  j["rotation_deg"] = e.rotation_deg;
  j["axis_ratio"] = e.axis_ratio;
  save_json(path, j);
}

DeviationalEllipse read_ellipse(const fs::path& path) {
  const json j = load_json(path);
  DeviationalEllipse e;
  e.center_x = get_field<double>(j, "center_x", path);
  e.center_y = get_field<double>(j, "center_y", path);
  e.semi_major = get_field<double>(j, "semi_major", path);
  e.semi_minor = get_field<double>(j, "semi_minor", path);
  e.rotation_deg = get_field<double>(j, "rotation_deg", path);
  e.axis_ratio = get_field<double>(j, "axis_ratio", path);
  return e;
}

void write_zones(const fs::path& path, const ZoneProfile& profile) {
  auto out = open_output(path);
  out << "zone_index,inner_km,outer_km,cluster,proportion,cell_count\n";
  for (const auto& z : profile.zones) {
    const std::string head = std::to_string(z.index) + ',' + format_double(z.inner_km) + ',' +
                             format_double(z.outer_km) + ',';
    if (z.empty()) {
      out << head << ",,0\n";
      continue;
    }
    for (std::size_t c = 0; c < z.cluster_counts.size(); ++c)
      out << head << c << ',' << format_double(*z.proportion(c)) << ',' << z.cell_count << '\n';
  }
  finish(out, path);
}

void write_cells_geojson(const fs::path& path, const GridSpec& grid,
                         const std::vector<std::size_t>& region_ids, const Labels& labels,
                         const std::vector<std::optional<std::size_t>>& cell_zone) {
  json features = json::array();
  for (std::size_t i = 0; i < region_ids.size(); ++i) {
    const std::size_t id = region_ids[i];
    const double x0 = grid.origin_x + static_cast<double>(id % grid.n_cols) * grid.cell_size;
    const double y0 = grid.origin_y + static_cast<double>(id / grid.n_cols) * grid.cell_size;
    const double x1 = x0 + grid.cell_size;
    const double y1 = y0 + grid.cell_size;
    json ring = json::array({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}});
    json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Polygon"}, {"coordinates", json::array({ring})}};
    feature["properties"] = {{"region_id", id},
                             {"cluster", labels[i]},
                             {"zone", i < cell_zone.size() && cell_zone[i] ? json(*cell_zone[i])
                                                                           : json(nullptr)}};
    features.push_back(std::move(feature));
  }
  json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = std::move(features);
  save_json(path, fc);
}

void write_planted_labels(const fs::path& path, const std::vector<std::size_t>& region_ids,
                          const Labels& labels, const std::vector<std::string>& names) {
  auto out = open_output(path);
  out << "region_id,archetype,name\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << region_ids[i] << ',' << labels[i] << ',' << csv_field(names.at(labels[i])) << '\n';
  finish(out, path);
}

}  // namespace urbanlra::io
