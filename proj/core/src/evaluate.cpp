#include "itfmap/evaluate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "itfmap/mapping.hpp"

namespace itfmap::evaluate {

double window_distance(const geometry::Direction& a, const geometry::Direction& b) {
  const double daz = geometry::wrap_residual(a.azimuth_deg - b.azimuth_deg);
  const double del = a.elevation_deg - b.elevation_deg;
  return std::sqrt(daz * daz + del * del);
}

MapError map_error(std::span<const geometry::DirectionEstimate> estimated, const simulate::AngleTrack& truth) {
  std::map<std::size_t, const geometry::Direction*> by_index;
  for (const auto& e : estimated) {
    if (e.direction) by_index[e.window_index] = &*e.direction;
  }
  MapError err;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto it = by_index.find(i);
    if (it == by_index.end()) continue;
    sum += window_distance(*it->second, truth.points[i]);
    ++err.included;
  }
  if (err.included == 0) throw std::invalid_argument("no overlapping valid windows between estimate and truth");
  err.excluded = truth.size() - err.included;
  err.mean_deg = sum / static_cast<double>(err.included);
  return err;
}

MapError map_error(const simulate::AngleTrack& estimated, const simulate::AngleTrack& truth) {
  std::vector<geometry::DirectionEstimate> est(estimated.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    est[i].window_index = i;
    est[i].direction = estimated.points[i];
  }
  return map_error(est, truth);
}

void BenchmarkGrid::validate() const {
  if (filters.empty() || methods.empty() || interp_methods.empty() || factors.empty()) {
    throw std::invalid_argument("benchmark grid must be non-empty in every dimension");
  }
  for (int f : factors) {
    if (f != 1 && f != 2 && f != 4 && f != 8) throw std::invalid_argument("interpolation factors must be 1, 2, 4 or 8");
  }
  for (auto m : interp_methods) {
    if (m == xcorr::InterpMethod::none) throw std::invalid_argument("grid interpolation must be linear or cubic");
  }
}

BenchmarkGrid full_grid() {
  BenchmarkGrid g;
  for (const char* name : {"wt-coif5-sure", "wt-coif5-universal", "wt-db10-sure", "wt-db10-universal",
                           "wt-fk14-sure", "wt-fk14-universal", "wt-sym4-sure", "wt-sym4-universal", "bpf", "kf"}) {
    g.filters.push_back(denoise::parse_filter(name));
  }
  g.methods = {xcorr::Method::cctd, xcorr::Method::ccfd, xcorr::Method::ccwd};
  g.interp_methods = {xcorr::InterpMethod::linear, xcorr::InterpMethod::cubic};
  g.factors = {1, 2, 4, 8};
  return g;
}

ErrorReport run_benchmark(const BenchmarkGrid& grid, std::span<const Dataset> datasets, const BenchOptions& options) {
  grid.validate();
  options.geometry.validate();
  if (datasets.empty()) throw std::invalid_argument("benchmark needs at least one dataset");
  for (const auto& ds : datasets) {
    if (ds.truth.points.empty()) throw std::invalid_argument("dataset '" + ds.name + "' has no ground truth");
    const SegmentationPlan plan{ds.truth.window_length, ds.truth.hop};
    if (plan.count(ds.record.length()) != ds.truth.size()) {
      throw std::invalid_argument("dataset '" + ds.name + "': truth window count does not match the record");
    }
  }

  const std::size_t n_interp = grid.interp_methods.size() * grid.factors.size();
  ErrorReport report;
  report.cells.resize(grid.cell_count());
  for (std::size_t f = 0; f < grid.filters.size(); ++f) {
    for (std::size_t m = 0; m < grid.methods.size(); ++m) {
      for (std::size_t k = 0; k < n_interp; ++k) {
        auto& cell = report.cells[(f * grid.methods.size() + m) * n_interp + k];
        cell.filter = denoise::filter_name(grid.filters[f]);
        cell.method = grid.methods[m];
        cell.interp = grid.interp_methods[k / grid.factors.size()];
        cell.factor = grid.factors[k % grid.factors.size()];
        cell.per_record_deg.assign(datasets.size(), std::numeric_limits<double>::quiet_NaN());
      }
    }
  }

  for (std::size_t r = 0; r < datasets.size(); ++r) {
    const auto& ds = datasets[r];
    const SegmentationPlan plan{ds.truth.window_length, ds.truth.hop};
    const double dt = ds.record.sample_interval;
    for (std::size_t f = 0; f < grid.filters.size(); ++f) {
      const auto filtered = mapping::denoise_record(ds.record, grid.filters[f]);
      for (std::size_t m = 0; m < grid.methods.size(); ++m) {
        xcorr::CorrelationOptions copt;
        copt.method = grid.methods[m];
        copt.wavelet = options.wavelet;
        copt.wavelet_spec = options.wavelet_spec;
        const auto corr = mapping::correlate_windows(filtered, plan, copt, options.threads);
        for (std::size_t k = 0; k < n_interp; ++k) {
          auto& cell = report.cells[(f * grid.methods.size() + m) * n_interp + k];
          const auto est = mapping::estimate_directions(corr, {cell.interp, cell.factor}, options.geometry, dt,
                                                        plan.window_length, options.threads);
          std::vector<geometry::DirectionEstimate> dirs;
          dirs.reserve(est.size());
          for (const auto& e : est) dirs.push_back(e.direction);
          cell.total_windows += ds.truth.size();
          std::size_t valid = 0;
          for (const auto& d : dirs) valid += d.valid() ? 1 : 0;
          if (valid == 0) {
            cell.excluded_windows += ds.truth.size();
            continue;
          }
          const auto err = map_error(dirs, ds.truth);
          cell.per_record_deg[r] = err.mean_deg;
          cell.excluded_windows += err.excluded;
        }
      }
    }
  }

  for (auto& cell : report.cells) {
    double sum = 0.0;
    for (double d : cell.per_record_deg) {
      if (std::isnan(d)) continue;
      sum += d;
      ++cell.records;
    }
    cell.mean_dist_deg =
        cell.records == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(cell.records);
  }
  return report;
}

}  // namespace itfmap::evaluate
