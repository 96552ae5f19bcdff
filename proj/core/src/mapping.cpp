#include "itfmap/mapping.hpp"

#include <algorithm>
#include <stdexcept>

#include "parallel.hpp"

namespace itfmap::mapping {

SampleRecord denoise_record(const SampleRecord& record, const denoise::FilterSpec& filter) {
  record.validate();
  denoise::validate(filter, record.sample_interval);
  SampleRecord out = record;
  if (std::holds_alternative<denoise::PassThrough>(filter)) return out;
  for (auto& ch : out.channels) ch = denoise::apply(filter, ch, record.sample_interval);
  return out;
}

std::vector<WindowCorrelation> correlate_windows(const SampleRecord& record, const SegmentationPlan& plan,
                                                 const xcorr::CorrelationOptions& options, std::size_t threads) {
  record.validate();
  const auto windows = segment(record, plan);
  auto wspec = options.wavelet_spec;
  wspec.dt = record.sample_interval;
  std::optional<WaveletBasis> basis;
  if (options.method == xcorr::Method::ccwd) {
    basis = WaveletBasis::from_name(options.wavelet);
    if (xcorr::levels_in_band(wspec).empty()) {
      throw std::invalid_argument("no wavelet level intersects the signal band at this sample interval");
    }
  }
  const auto run = [&](std::span<const double> x, std::span<const double> y) {
    switch (options.method) {
      case xcorr::Method::cctd: return xcorr::cc_time(x, y);
      case xcorr::Method::ccfd: return xcorr::cc_freq(x, y);
      case xcorr::Method::ccwd: return xcorr::cc_wavelet(x, y, *basis, wspec);
    }
    throw std::invalid_argument("unknown correlation method");
  };

  std::vector<WindowCorrelation> out(windows.size());
  detail::parallel_for(windows.size(), threads, [&](std::size_t i) {
    const auto nw = normalize_window(windows[i]);
    auto& wc = out[i];
    wc.index = nw.index;
    wc.start = nw.start;
    if (nw.any_degenerate()) return;
    wc.bc = run(nw.segment(Channel::B), nw.segment(Channel::C));
    wc.bd = run(nw.segment(Channel::B), nw.segment(Channel::D));
  });
  return out;
}

std::vector<WindowEstimate> estimate_directions(const std::vector<WindowCorrelation>& correlations,
                                                const xcorr::InterpSpec& interp, const geometry::ArrayGeometry& geom,
                                                double dt, std::size_t window_length, std::size_t threads) {
  geom.validate();
  std::vector<WindowEstimate> out(correlations.size());
  detail::parallel_for(correlations.size(), threads, [&](std::size_t i) {
    const auto& wc = correlations[i];
    auto& est = out[i];
    est.time_s = (static_cast<double>(wc.start) + static_cast<double>(window_length) / 2.0) * dt;
    if (!wc.bc || !wc.bd) {
      est.direction.window_index = wc.index;
      est.direction.degenerate = true;
      return;
    }
    const auto tdoa = [&](const xcorr::CorrelationSeries& s, xcorr::Baseline b) {
      xcorr::TdoaEstimate t;
      t.window_index = wc.index;
      t.baseline = b;
      t.fractional_lag = xcorr::refine_peak(s, interp);
      t.peak_coefficient = s.coefficients[xcorr::peak_index(s)];
      const auto conv = xcorr::lag_to_tdoa(t.fractional_lag, dt);
      t.tau_s = conv.tau_s;
      t.phase_rad = conv.phase_rad;
      return t;
    };
    est.bc = tdoa(*wc.bc, xcorr::Baseline::BC);
    est.bd = tdoa(*wc.bd, xcorr::Baseline::BD);
    est.direction = geometry::direction_from_tdoa(est.bc->tau_s, est.bd->tau_s, geom);
    est.direction.window_index = wc.index;
    est.direction.peak_coefficient = std::min(est.bc->peak_coefficient, est.bd->peak_coefficient);
  });
  return out;
}

std::vector<geometry::DirectionEstimate> MapResult::directions() const {
  std::vector<geometry::DirectionEstimate> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(w.direction);
  return out;
}

std::vector<double> MapResult::times() const {
  std::vector<double> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(w.time_s);
  return out;
}

MapResult map_record(const SampleRecord& record, const MappingConfig& config) {
  record.validate();
  config.geometry.validate();
  config.plan.count(record.length());
  const auto filtered = denoise_record(record, config.filter);
  const auto corr = correlate_windows(filtered, config.plan, config.correlation, config.threads);
  MapResult result;
  result.windows = estimate_directions(corr, config.interp, config.geometry, record.sample_interval,
                                       config.plan.window_length, config.threads);
  for (const auto& w : result.windows) {
    if (w.direction.degenerate) ++result.degenerate_windows;
    if (!w.direction.valid()) ++result.invalid_windows;
  }
  return result;
}

}  // namespace itfmap::mapping
