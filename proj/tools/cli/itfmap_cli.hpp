#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace itfmap::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInvalidConfig = 3,
  kMissingInput = 4,
  kWriteFailure = 5,
  kProcessing = 6,
};

/// Every option of every subcommand. Values come from the config file first
/// and are then overridden by flags.
struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string filter = "none";
  std::string cc = "cctd";
  std::string interp = "cubic:8";
  std::size_t window = 256;
  std::size_t hop = 1;
  double baseline_m = 15.0;
  double dt_ns = 4.0;
  double speed_mps = 299792458.0;
  std::uint64_t seed = 1;
  std::string snr_db = "inf";
  std::string wavelet = "sym4";
  std::size_t threads = 0;

  // simulate
  std::size_t samples = 20000;
  std::string track = "random-walk";
  std::string reference = "bursts";  // bursts | noise
  double az_deg = 135.0;
  double el_deg = 45.0;
  double az_end_deg = 135.0;
  double el_end_deg = 45.0;
  double step_deg = 0.1;
  double el_min_deg = 0.0;
  double el_max_deg = 90.0;
  double augment_sigma_deg = 0.0;
  double augment_scale = 1.0;
  bool augment_azimuth = false;
  bool flip = false;
  std::size_t records = 1;

  // map
  std::string elevation_series;

  // bench
  std::string grid = "single";
  std::string format;  // csv or markdown; empty picks from the output extension
};

/// Parses arguments and runs one subcommand (simulate, map, bench, plot).
/// Diagnostics go to `err`, progress to `out`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SVG scatter of the valid rows of a map file: azimuth on x, elevation on
/// y, colour by time. Throws std::runtime_error("no valid windows") when
/// there is nothing to draw.
std::string render_map_svg(const std::filesystem::path& map_csv, const std::string& title);

}  // namespace itfmap::cli
