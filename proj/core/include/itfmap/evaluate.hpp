#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "itfmap/denoise.hpp"
#include "itfmap/geometry.hpp"
#include "itfmap/signals.hpp"
#include "itfmap/simulate.hpp"
#include "itfmap/xcorr.hpp"

namespace itfmap::evaluate {

/// sqrt(dAz^2 + dEl^2) in degrees, with dAz wrapped to (-180, 180].
double window_distance(const geometry::Direction& a, const geometry::Direction& b);

struct MapError {
  double mean_deg = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;  // truth windows without a valid estimate
};

/// Mean per-window distance over truth windows that have a valid estimate
/// with the same window index. Throws std::invalid_argument when no window
/// overlaps.
MapError map_error(std::span<const geometry::DirectionEstimate> estimated, const simulate::AngleTrack& truth);
/// Track-to-track form; both tracks are indexed from window 0.
MapError map_error(const simulate::AngleTrack& estimated, const simulate::AngleTrack& truth);

struct Dataset {
  std::string name;
  SampleRecord record;
  simulate::AngleTrack truth;  // also fixes the window length and hop
};

struct BenchmarkGrid {
  std::vector<denoise::FilterSpec> filters;
  std::vector<xcorr::Method> methods;
  std::vector<xcorr::InterpMethod> interp_methods;
  std::vector<int> factors;

  std::size_t cell_count() const {
    return filters.size() * methods.size() * interp_methods.size() * factors.size();
  }
  /// Throws std::invalid_argument when a dimension is empty or a factor is
  /// not in {1, 2, 4, 8}.
  void validate() const;
};

/// The ten filter rows, three methods, two interpolations and four factors.
BenchmarkGrid full_grid();

struct BenchOptions {
  geometry::ArrayGeometry geometry;
  std::string wavelet = "sym4";                // correlation basis for ccwd
  xcorr::WaveletCorrelationSpec wavelet_spec;  // dt is taken per record
  std::size_t threads = 0;
};

struct CellResult {
  std::string filter;
  xcorr::Method method = xcorr::Method::cctd;
  xcorr::InterpMethod interp = xcorr::InterpMethod::linear;
  int factor = 1;
  double mean_dist_deg = 0.0;          // NaN when no record contributed
  std::size_t records = 0;             // records with at least one valid window
  std::size_t excluded_windows = 0;    // summed over all records
  std::size_t total_windows = 0;
  std::vector<double> per_record_deg;  // NaN for records without valid windows
};

struct ErrorReport {
  std::vector<CellResult> cells;  // filter-major, then method, interp, factor
};

/// Runs every grid cell on every dataset. Each record is scored first, then
/// records are averaged. Output is independent of the thread count.
ErrorReport run_benchmark(const BenchmarkGrid& grid, std::span<const Dataset> datasets, const BenchOptions& options);

enum class ReportFormat { csv, markdown };

ReportFormat parse_report_format(std::string_view text);

/// CSV columns `filter,method,interp,factor,mean_dist_deg,records,excluded_windows`
/// with 6 decimals; markdown has one row per filter and one column per
/// method/interp/factor combination. `comments` become leading `# ` lines in
/// CSV and a preamble in markdown.
std::string render_report(const ErrorReport& report, ReportFormat format, const std::vector<std::string>& comments = {});
void emit_report(const ErrorReport& report, const std::filesystem::path& path, ReportFormat format,
                 const std::vector<std::string>& comments = {});

struct ReportRow {
  std::string filter;
  std::string method;
  std::string interp;
  int factor = 1;
  double mean_dist_deg = 0.0;
  std::size_t records = 0;
  std::size_t excluded_windows = 0;
};

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);

}  // namespace itfmap::evaluate
