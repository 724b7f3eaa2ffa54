#include "urbanlra/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>

#include "urbanlra/error.hpp"
#include "urbanlra/io.hpp"
#include "urbanlra/textio.hpp"

namespace urbanlra::cli {

namespace {

std::vector<CheckInRecord> read_checkins(const fs::path& path, std::ostream& log) {
  auto in = open_input(path);
  auto parsed = parse_records(in);
  log << "[read] " << path.string() << ": " << parsed.report.parsed << " records, "
      << parsed.report.skipped_lines.size() << " malformed lines skipped\n";
  return std::move(parsed.records);
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& flag) {
  const auto parts = split_csv(text);
  std::pair<double, double> out;
  if (parts.size() != 2 || !parse_double(parts[0], out.first) || !parse_double(parts[1], out.second))
    throw CLI::ValidationError(flag, "expected two comma-separated numbers, got '" + text + "'");
  return out;
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  std::size_t lo = 0, hi = 0;
  if (dots == std::string::npos || !parse_size(text.substr(0, dots), lo) ||
      !parse_size(text.substr(dots + 2), hi) || lo < 2 || hi < lo)
    throw CLI::ValidationError("--k-range", "expected MIN..MAX with 2 <= MIN <= MAX, got '" + text + "'");
  return {lo, hi};
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

std::size_t run_ingest(const IngestOptions& o, std::ostream& log) {
  auto records = read_checkins(o.checkins, log);
  if (o.lonlat_ref) {
    const auto [ref_lon, ref_lat] = *o.lonlat_ref;
    for (auto& r : records) {
      const auto [x, y] = equirectangular_project(r.x, r.y, ref_lon, ref_lat);
      r.x = x;
      r.y = y;
    }
    log << "[ingest] projected " << records.size() << " lon/lat records around (" << ref_lon << ", "
        << ref_lat << ")\n";
  }
  const auto dedup = dedup_filter(records, o.min_gap_seconds);
  io::write_checkins(o.out, dedup.records);
  log << "[ingest] kept " << dedup.records.size() << " records, dropped " << dedup.dropped
      << " duplicates -> " << o.out.string() << '\n';
  return dedup.records.size();
}

std::size_t run_build(const BuildOptions& o, std::ostream& log) {
  const auto records = read_checkins(o.checkins, log);
  const GridSpec grid = io::read_grid(o.grid);
  const CategoryMap map = o.categories ? io::read_category_map(*o.categories) : CategoryMap::standard();
  const auto built = build_matrix(records, grid, map);
  io::write_matrix(o.out, built.matrix);
  log << "[build] " << built.matrix.regions() << " regions x " << kTtdCount << " TTDs, accepted "
      << built.report.accepted << ", outside grid " << built.report.outside << ", dropped tags "
      << built.report.dropped_tag << ", empty regions " << built.report.empty_regions.size() << " -> "
      << o.out.string() << '\n';
  return built.matrix.regions();
}

void run_rank_scan(const RankScanOptions& o, std::ostream& log) {
  const auto m = io::read_matrix(o.matrix);
  const auto f = svd(m.values);
  const std::size_t r_max = std::min(o.r_max, f.S.size());
  const auto report = rank_scan(m.values, f, r_max, o.profiles);
  io::write_rank_scan(o.out, report);
  log << "[rank-scan] " << m.regions() << " regions, " << report.rows.size() << " ranks -> "
      << o.out.string() << '\n';
}

void run_decompose(const DecomposeOptions& o, std::ostream& log) {
  const auto m = io::read_matrix(o.matrix);
  const auto f = svd(m.values);
  io::write_factors(o.out, f, m.region_ids);
  log << "[decompose] " << m.regions() << " x " << m.values.cols() << ", " << f.S.size()
      << " singular values, " << f.sweeps << " sweeps -> " << o.out.string() << '\n';
}

std::size_t run_ustas(const UstasOptions& o, std::ostream& log) {
  const auto ff = io::read_factors(o.factors);
  std::size_t r = 0;
  if (o.rank) {
    r = *o.rank;
  } else {
    const auto scan = rank_scan(Matrix(), ff.factors, ff.factors.S.size(), false);
    r = suggest_rank(scan, o.energy, o.error);
    const auto& row = scan.rows[r - 1];
    log << "[ustas] selected rank " << r << " (energy " << format_double(row.energy) << ", error "
        << format_double(row.error) << ")\n";
  }
  const auto t = truncate(ff.factors, r);
  const auto structures = extract_ustas(t);
  const auto emb = joint_embedding(t);
  io::write_ustas(o.out, structures, ff.region_ids, o.plots);
  io::write_region_embedding(o.out / "region_embedding.csv", emb.region_coords, ff.region_ids);
  io::write_ttd_embedding(o.out / "ttd_embedding.csv", emb.ttd_coords);
  log << "[ustas] wrote " << structures.size() << " structures and rank-" << r
      << " embeddings for " << ff.region_ids.size() << " regions -> " << o.out.string() << '\n';
  return r;
}

std::size_t run_cluster(const ClusterOptions& o, std::ostream& log) {
  const auto emb = io::read_region_embedding(o.embedding);
  const std::size_t m = emb.coords.rows();
  if (m < 3) throw InvalidArgument("clustering needs at least 3 regions, got " + std::to_string(m));
  const std::size_t k_max = std::min(o.k_max, m - 1);
  if (o.k_min > k_max)
    throw InvalidArgument("k range " + std::to_string(o.k_min) + ".." + std::to_string(o.k_max) +
                          " is empty for " + std::to_string(m) + " regions");
  ClusteringConfig config;
  config.n_restarts = o.restarts;
  config.max_iters = o.max_iters;
  config.seed = o.seed;
  config.threads = o.threads;
  const auto sel = select_k(emb.coords, o.k_min, k_max, config);
  const std::size_t chosen = sel.recommended - o.k_min;
  const auto& result = sel.results[chosen];

  io::write_clusters(o.out / "clusters.csv", emb.region_ids, result.labels);
  io::write_centers(o.out / "centers.csv", result.centers);
  io::write_validity(o.out / "validity.csv", sel.scores);
  if (o.ttd_embedding) {
    const Matrix ttd = io::read_ttd_embedding(*o.ttd_embedding);
    if (ttd.cols() != emb.coords.cols())
      throw InvalidArgument("TTD embedding has " + std::to_string(ttd.cols()) +
                            " columns, region embedding has " + std::to_string(emb.coords.cols()));
    io::write_characterization(o.out / "characterization.csv", characterize_clusters(result, ttd));
  }
  std::vector<std::size_t> sizes(sel.recommended, 0);
  for (auto l : result.labels) ++sizes[l];
  log << "[cluster] " << m << " regions, k=" << sel.recommended << " (scanned " << o.k_min << ".."
      << k_max << "), inertia " << format_double(result.inertia) << ", sizes";
  for (auto s : sizes) log << ' ' << s;
  log << " -> " << o.out.string() << '\n';
  return sel.recommended;
}

void run_zones(const ZonesOptions& o, std::ostream& log) {
  const auto assignment = io::read_clusters(o.clusters);
  const auto m = io::read_matrix(o.matrix);
  const GridSpec grid = io::read_grid(o.grid);
  if (assignment.region_ids != m.region_ids)
    throw InvalidArgument("cluster file and matrix list different regions");
  for (auto id : m.region_ids)
    if (id >= grid.cell_count())
      throw InvalidArgument("region " + std::to_string(id) + " lies outside the grid");

  std::vector<WeightedPoint> points;
  for (std::size_t i = 0; i < m.regions(); ++i) {
    const auto [x, y] = grid.cell_center(m.region_ids[i]);
    points.push_back({x, y, m.row_total(i)});
  }
  const auto ellipse = deviational_ellipse(points);
  ZoneSchedule schedule;
  schedule.breakpoints_km = o.breakpoints_km;
  const auto profile = zone_profiles(assignment.labels, m.region_ids, grid, ellipse, schedule);

  io::write_ellipse(o.out / "ellipse.json", ellipse);
  io::write_zones(o.out / "zones.csv", profile);
  io::write_cells_geojson(o.out / "cells.geojson", grid, m.region_ids, assignment.labels,
                          profile.cell_zone);
  std::size_t zoned = 0;
  for (const auto& z : profile.zones) zoned += z.cell_count;
  log << "[zones] ellipse ratio " << format_double(ellipse.axis_ratio) << ", rotation "
      << format_double(ellipse.rotation_deg) << " deg; " << zoned << " of " << m.regions()
      << " cells in " << profile.zones.size() << " zones -> " << o.out.string() << '\n';
}

void run_synth(const SynthOptions& o, std::ostream& log) {
  SynthSpec spec = io::read_synth_spec(o.spec);
  if (o.seed) spec.seed = *o.seed;
  const auto city = generate_city(spec);
  io::write_matrix(o.out / "matrix.csv", city.matrix);
  io::write_grid(o.out / "grid.json", city.grid);
  io::write_category_map(o.out / "categories.json", CategoryMap::standard());
  io::write_planted_labels(o.out / "labels.csv", city.matrix.region_ids, city.planted,
                           city.archetype_names);
  if (spec.emit_checkins) io::write_checkins(o.out / "checkins.csv", city.checkins);
  log << "[synth] " << city.matrix.regions() << " cells, " << city.archetype_names.size()
      << " archetypes, total count " << format_double(city.matrix.total()) << ", "
      << city.checkins.size() << " check-ins -> " << o.out.string() << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Urban functional regions from check-in data via low-rank approximation", "urbanlra"};
  app.require_subcommand(1);

  std::string lonlat, k_range;
  std::optional<std::size_t> k;

  IngestOptions ingest;
  std::string ingest_in, ingest_out;
  auto* c_ingest = app.add_subcommand("ingest", "Parse, optionally project and de-duplicate check-ins");
  c_ingest->add_option("--checkins", ingest_in, "Raw check-in CSV")->required();
  c_ingest->add_option("--out", ingest_out, "Cleaned check-in CSV")->required();
  c_ingest->add_option("--min-gap", ingest.min_gap_seconds, "Seconds between repeats to keep")
      ->capture_default_str();
  c_ingest->add_option("--lonlat-ref", lonlat, "LON,LAT: treat x,y as degrees and project (toy data)");

  BuildOptions build;
  std::string build_in, build_grid, build_cat, build_out;
  auto* c_build = app.add_subcommand("build", "Aggregate check-ins into the region x TTD matrix");
  c_build->add_option("--checkins", build_in, "Check-in CSV")->required();
  c_build->add_option("--grid", build_grid, "Grid JSON")->required();
  c_build->add_option("--categories", build_cat, "Tag-to-category JSON (default: built-in names)");
  c_build->add_option("--out", build_out, "Matrix CSV")->required();

  RankScanOptions scan;
  std::string scan_in, scan_out;
  auto* c_scan = app.add_subcommand("rank-scan", "Approximation error and energy for r = 1..rmax");
  c_scan->add_option("--matrix", scan_in, "Matrix CSV")->required();
  c_scan->add_option("--rmax", scan.r_max, "Largest rank (clipped to min(m, n))")->capture_default_str();
  c_scan->add_flag("--profiles", scan.profiles, "Add the demand-profile residual column");
  c_scan->add_option("--out", scan_out, "Scan CSV")->required();

  DecomposeOptions dec;
  std::string dec_in, dec_out;
  auto* c_dec = app.add_subcommand("decompose", "Full SVD written as U.csv, S.csv, V.csv");
  c_dec->add_option("--matrix", dec_in, "Matrix CSV")->required();
  c_dec->add_option("--out", dec_out, "Output directory")->required();

  UstasOptions ust;
  std::string ust_in, ust_out;
  auto* c_ust = app.add_subcommand("ustas", "Activity structures and joint embeddings at rank r");
  c_ust->add_option("--factors", ust_in, "Directory written by decompose")->required();
  c_ust->add_option("--rank", ust.rank, "Rank (default: smallest meeting both thresholds)");
  c_ust->add_option("--energy", ust.energy, "Energy threshold")->capture_default_str();
  c_ust->add_option("--error", ust.error, "Error threshold")->capture_default_str();
  c_ust->add_flag("--plots", ust.plots, "Also write SVG heatmaps");
  c_ust->add_option("--out", ust_out, "Output directory")->required();

  ClusterOptions clu;
  std::string clu_in, clu_ttd, clu_out;
  auto* c_clu = app.add_subcommand("cluster", "Spherical K-means on region coordinates");
  c_clu->add_option("--embedding", clu_in, "region_embedding.csv")->required();
  c_clu->add_option("--ttd-embedding", clu_ttd, "ttd_embedding.csv, enables characterization.csv");
  auto* clu_k = c_clu->add_option("--k", k, "Number of clusters");
  c_clu->add_option("--k-range", k_range, "MIN..MAX, pick k by validity vote (default 2..10)")
      ->excludes(clu_k);
  c_clu->add_option("--seed", clu.seed, "Random seed")->capture_default_str();
  c_clu->add_option("--restarts", clu.restarts, "Restarts per k")->capture_default_str();
  c_clu->add_option("--max-iters", clu.max_iters, "Iterations per restart")->capture_default_str();
  c_clu->add_option("--threads", clu.threads, "Worker threads, 0 = all cores")->capture_default_str();
  c_clu->add_option("--out", clu_out, "Output directory")->required();

  ZonesOptions zon;
  std::string zon_clu, zon_mat, zon_grid, zon_out;
  auto* c_zon = app.add_subcommand("zones", "Deviational ellipse and concentric zone profiles");
  c_zon->add_option("--clusters", zon_clu, "clusters.csv")->required();
  c_zon->add_option("--matrix", zon_mat, "Matrix CSV (row totals weight the ellipse)")->required();
  c_zon->add_option("--grid", zon_grid, "Grid JSON")->required();
  c_zon->add_option("--breakpoints", zon.breakpoints_km, "Zone semi-major breakpoints in km")
      ->delimiter(',');
  c_zon->add_option("--out", zon_out, "Output directory")->required();

  SynthOptions syn;
  std::string syn_spec, syn_out;
  auto* c_syn = app.add_subcommand("synth", "Generate a planted synthetic city");
  c_syn->add_option("--spec", syn_spec, "Synthetic city JSON")->required();
  c_syn->add_option("--seed", syn.seed, "Override the spec seed");
  c_syn->add_option("--out", syn_out, "Output directory")->required();

  std::string pipe_in, pipe_out;
  std::uint64_t pipe_seed = 0;
  std::optional<std::size_t> pipe_rank;
  double pipe_energy = kDefaultEnergyThreshold, pipe_error = kDefaultErrorThreshold;
  std::size_t pipe_rmax = 40, pipe_restarts = 16;
  unsigned pipe_threads = 0;
  bool pipe_plots = false;
  double pipe_gap = 60.0;
  std::vector<double> pipe_bps = ZonesOptions{}.breakpoints_km;
  auto* c_pipe = app.add_subcommand("pipeline", "Run every stage on a directory with checkins.csv and grid.json");
  c_pipe->add_option("--in", pipe_in, "Input directory (checkins.csv, grid.json, optional categories.json)")
      ->required();
  c_pipe->add_option("--out", pipe_out, "Output directory")->required();
  c_pipe->add_option("--seed", pipe_seed, "Random seed")->capture_default_str();
  c_pipe->add_option("--rank", pipe_rank, "Fixed rank instead of threshold selection");
  c_pipe->add_option("--energy", pipe_energy, "Energy threshold")->capture_default_str();
  c_pipe->add_option("--error", pipe_error, "Error threshold")->capture_default_str();
  c_pipe->add_option("--rmax", pipe_rmax, "Rows in rank_scan.csv")->capture_default_str();
  auto* pipe_k = c_pipe->add_option("--k", k, "Number of clusters");
  c_pipe->add_option("--k-range", k_range, "MIN..MAX (default 2..10)")->excludes(pipe_k);
  c_pipe->add_option("--restarts", pipe_restarts, "Restarts per k")->capture_default_str();
  c_pipe->add_option("--threads", pipe_threads, "Worker threads, 0 = all cores")->capture_default_str();
  c_pipe->add_option("--min-gap", pipe_gap, "Seconds between repeats to keep")->capture_default_str();
  c_pipe->add_option("--breakpoints", pipe_bps, "Zone semi-major breakpoints in km")->delimiter(',');
  c_pipe->add_flag("--plots", pipe_plots, "Also write SVG heatmaps");

  std::pair<std::size_t, std::size_t> ks{2, 10};
  try {
    app.parse(argc, argv);
    if (!lonlat.empty()) ingest.lonlat_ref = parse_pair(lonlat, "--lonlat-ref");
    if (!k_range.empty()) ks = parse_k_range(k_range);
    if (k) {
      if (*k < 2) throw CLI::ValidationError("--k", "must be at least 2");
      ks = {*k, *k};
    }
    for (double t : {ust.energy, ust.error, pipe_energy, pipe_error})
      if (!(t > 0.0 && t <= 1.0)) throw CLI::ValidationError("--energy/--error", "thresholds must lie in (0, 1]");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto* sub = app.get_subcommands().front();
  try {
    if (sub == c_ingest) {
      ingest.checkins = ingest_in;
      ingest.out = ingest_out;
      run_ingest(ingest, err);
    } else if (sub == c_build) {
      build.checkins = build_in;
      build.grid = build_grid;
      if (!build_cat.empty()) build.categories = build_cat;
      build.out = build_out;
      run_build(build, err);
    } else if (sub == c_scan) {
      scan.matrix = scan_in;
      scan.out = scan_out;
      run_rank_scan(scan, err);
    } else if (sub == c_dec) {
      dec.matrix = dec_in;
      dec.out = dec_out;
      run_decompose(dec, err);
    } else if (sub == c_ust) {
      ust.factors = ust_in;
      ust.out = ust_out;
      run_ustas(ust, err);
    } else if (sub == c_clu) {
      clu.embedding = clu_in;
      if (!clu_ttd.empty()) clu.ttd_embedding = clu_ttd;
      clu.k_min = ks.first;
      clu.k_max = ks.second;
      clu.out = clu_out;
      run_cluster(clu, err);
    } else if (sub == c_zon) {
      zon.clusters = zon_clu;
      zon.matrix = zon_mat;
      zon.grid = zon_grid;
      zon.out = zon_out;
      run_zones(zon, err);
    } else if (sub == c_syn) {
      syn.spec = syn_spec;
      syn.out = syn_out;
      run_synth(syn, err);
    } else if (sub == c_pipe) {
      const fs::path in = pipe_in;
      const fs::path res = pipe_out;
      run_ingest({in / "checkins.csv", res / "checkins_clean.csv", pipe_gap, std::nullopt}, err);
      BuildOptions b{res / "checkins_clean.csv", in / "grid.json", std::nullopt, res / "matrix.csv"};
      if (fs::exists(in / "categories.json")) b.categories = in / "categories.json";
      run_build(b, err);
      run_rank_scan({res / "matrix.csv", pipe_rmax, true, res / "rank_scan.csv"}, err);
      run_decompose({res / "matrix.csv", res / "factors"}, err);
      run_ustas({res / "factors", pipe_rank, pipe_energy, pipe_error, pipe_plots, res / "ustas"}, err);
      ClusterOptions c;
      c.embedding = res / "ustas" / "region_embedding.csv";
      c.ttd_embedding = res / "ustas" / "ttd_embedding.csv";
      c.k_min = ks.first;
      c.k_max = ks.second;
      c.restarts = pipe_restarts;
      c.seed = pipe_seed;
      c.threads = pipe_threads;
      c.out = res / "clusters";
      run_cluster(c, err);
      run_zones({res / "clusters" / "clusters.csv", res / "matrix.csv", in / "grid.json", pipe_bps,
                 res / "zones"},
                err);
    }
  } catch (const RankSelectionError& e) {
    err << "error: " << sub->get_name() << ": rank selection (" << e.binding()
        << " threshold binding): " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << sub->get_name() << ": " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace urbanlra::cli
