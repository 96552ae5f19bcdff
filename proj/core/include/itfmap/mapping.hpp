#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "itfmap/denoise.hpp"
#include "itfmap/geometry.hpp"
#include "itfmap/signals.hpp"
#include "itfmap/xcorr.hpp"

namespace itfmap::mapping {

struct MappingConfig {
  SegmentationPlan plan;
  denoise::FilterSpec filter = denoise::PassThrough{};
  xcorr::CorrelationOptions correlation;
  xcorr::InterpSpec interp{xcorr::InterpMethod::cubic, 8};
  geometry::ArrayGeometry geometry;
  std::size_t threads = 0;  // 0 picks the hardware concurrency
};

/// Both baseline correlations of one window; empty when a segment was
/// degenerate.
struct WindowCorrelation {
  std::size_t index = 0;
  std::size_t start = 0;
  std::optional<xcorr::CorrelationSeries> bc;
  std::optional<xcorr::CorrelationSeries> bd;
};

/// Applies the filter to every channel of the record.
SampleRecord denoise_record(const SampleRecord& record, const denoise::FilterSpec& filter);

/// Segments, normalizes and correlates B-C and B-D for every window. The
/// wavelet spec's sample interval is taken from the record.
std::vector<WindowCorrelation> correlate_windows(const SampleRecord& record, const SegmentationPlan& plan,
                                                 const xcorr::CorrelationOptions& options, std::size_t threads = 0);

struct WindowEstimate {
  geometry::DirectionEstimate direction;
  std::optional<xcorr::TdoaEstimate> bc;
  std::optional<xcorr::TdoaEstimate> bd;
  double time_s = 0.0;
};

/// Peak refinement, lag-to-TDOA conversion and direction finding.
std::vector<WindowEstimate> estimate_directions(const std::vector<WindowCorrelation>& correlations,
                                                const xcorr::InterpSpec& interp, const geometry::ArrayGeometry& geom,
                                                double dt, std::size_t window_length, std::size_t threads = 0);

struct MapResult {
  std::vector<WindowEstimate> windows;
  std::size_t degenerate_windows = 0;
  std::size_t invalid_windows = 0;  // gate failures and degenerate windows

  std::vector<geometry::DirectionEstimate> directions() const;
  std::vector<double> times() const;
};

/// Full pipeline on one record. Validates the configuration first and throws
/// std::invalid_argument on any violated precondition.
MapResult map_record(const SampleRecord& record, const MappingConfig& config);

}  // namespace itfmap::mapping
