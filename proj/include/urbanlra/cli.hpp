#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Command-line front end. Each stage reads and writes files only, so running
// the stages one by one and running `pipeline` give identical outputs.

namespace urbanlra::cli {

namespace fs = std::filesystem;

struct IngestOptions {
  fs::path checkins;
  fs::path out;
  double min_gap_seconds = 60.0;
  std::optional<std::pair<double, double>> lonlat_ref;  // x, y read as lon, lat when set
};

struct BuildOptions {
  fs::path checkins;
  fs::path grid;
  std::optional<fs::path> categories;
  fs::path out;
};

struct RankScanOptions {
  fs::path matrix;
  std::size_t r_max = 40;  // clipped to min(m, n)
  bool profiles = false;
  fs::path out;
};

struct DecomposeOptions {
  fs::path matrix;
  fs::path out;  // directory
};

struct UstasOptions {
  fs::path factors;  // directory
  std::optional<std::size_t> rank;
  double energy = 0.90;
  double error = 0.05;
  bool plots = false;
  fs::path out;  // directory
};

struct ClusterOptions {
  fs::path embedding;
  std::optional<fs::path> ttd_embedding;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t restarts = 16;
  std::size_t max_iters = 300;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  fs::path out;  // directory
};

struct ZonesOptions {
  fs::path clusters;
  fs::path matrix;
  fs::path grid;
  std::vector<double> breakpoints_km = {1, 3, 5, 7, 9, 11, 13, 15, 17};
  fs::path out;  // directory
};

struct SynthOptions {
  fs::path spec;
  std::optional<std::uint64_t> seed;
  fs::path out;  // directory
};

std::size_t run_ingest(const IngestOptions& o, std::ostream& log);
std::size_t run_build(const BuildOptions& o, std::ostream& log);
void run_rank_scan(const RankScanOptions& o, std::ostream& log);
void run_decompose(const DecomposeOptions& o, std::ostream& log);
/// Returns the rank used.
std::size_t run_ustas(const UstasOptions& o, std::ostream& log);
/// Returns the k written to clusters.csv.
std::size_t run_cluster(const ClusterOptions& o, std::ostream& log);
void run_zones(const ZonesOptions& o, std::ostream& log);
void run_synth(const SynthOptions& o, std::ostream& log);

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Returns 0 on success, 1 when a stage fails and 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace urbanlra::cli
