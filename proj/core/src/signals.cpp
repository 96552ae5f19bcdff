#include "itfmap/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itfmap {

void SampleRecord::validate() const {
  const std::size_t n = channels[0].size();
  for (const auto& ch : channels) {
    if (ch.size() != n) {
      throw std::invalid_argument("record channels have unequal lengths");
    }
  }
  if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
    throw std::invalid_argument("sample interval must be positive");
  }
}

std::size_t SegmentationPlan::count(std::size_t record_length) const {
  if (hop == 0) throw std::invalid_argument("segmentation hop must be >= 1");
  if (window_length == 0) throw std::invalid_argument("window length must be >= 1");
  if (window_length > record_length) {
    throw std::invalid_argument("window length " + std::to_string(window_length) +
                                " exceeds record length " + std::to_string(record_length));
  }
  return (record_length - window_length) / hop + 1;
}

std::vector<Window> segment(const SampleRecord& record, const SegmentationPlan& plan) {
  record.validate();
  const std::size_t n = plan.count(record.length());
  std::vector<Window> windows;
  windows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Window w;
    w.index = i;
    w.start = i * plan.hop;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      w.segments[c] = std::span<const double>(record.channels[c]).subspan(w.start, plan.window_length);
    }
    windows.push_back(w);
  }
  return windows;
}

NormalizedSegment normalize_segment(std::span<const double> samples) {
  NormalizedSegment out;
  out.values.assign(samples.begin(), samples.end());
  if (samples.empty()) {
    out.degenerate = true;
    return out;
  }
  double mean = 0.0;
  double scale = 0.0;
  for (double v : samples) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(samples.size());

  double peak = 0.0;
  for (double& v : out.values) {
    v -= mean;
    peak = std::max(peak, std::abs(v));
  }
  // Relative floor so rounding residue of a constant segment is not blown up to +-1.
  if (peak <= 1e-12 * std::max(1.0, scale)) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    out.degenerate = true;
    return out;
  }
  for (double& v : out.values) v /= peak;
  return out;
}

Window NormalizedWindow::view() const {
  Window w;
  w.index = index;
  w.start = start;
  for (std::size_t c = 0; c < kChannelCount; ++c) w.segments[c] = segments[c];
  return w;
}

NormalizedWindow normalize_window(const Window& window) {
  NormalizedWindow out;
  out.index = window.index;
  out.start = window.start;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    if (window.segments[c].size() < 2) {
      throw std::invalid_argument("window segments need at least 2 samples");
    }
    auto seg = normalize_segment(window.segments[c]);
    out.segments[c] = std::move(seg.values);
    out.degenerate[c] = seg.degenerate;
  }
  return out;
}

}  // namespace itfmap
