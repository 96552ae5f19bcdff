#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itfmap/wavelet.hpp"

namespace itfmap::xcorr {

/// Normalized cross-correlation over lags -max_lag..+max_lag. Positive lag
/// means the second input is delayed relative to the first.
struct CorrelationSeries {
  std::vector<double> coefficients;
  std::ptrdiff_t max_lag = 0;

  std::size_t size() const { return coefficients.size(); }
  std::ptrdiff_t lag_at(std::size_t i) const { return static_cast<std::ptrdiff_t>(i) - max_lag; }
  double at_lag(std::ptrdiff_t lag) const {
    return coefficients[static_cast<std::size_t>(lag + max_lag)];
  }
};

enum class Method { cctd, ccfd, ccwd };

Method parse_method(std::string_view text);
std::string method_name(Method m);

/// Direct sum: c[k] = sum_n x[n] y[n+k] / (|x| |y|), zero outside bounds.
/// Throws std::invalid_argument on unequal lengths or a zero-energy input.
CorrelationSeries cc_time(std::span<const double> x, std::span<const double> y);

/// Same contract as cc_time, computed from the conjugate spectral product
/// on a zero-padded FFT grid of at least 2n-1 points.
CorrelationSeries cc_freq(std::span<const double> x, std::span<const double> y);

struct WaveletCorrelationSpec {
  int levels = 4;
  double band_low_hz = 40e6;
  double band_high_hz = 80e6;
  double dt = 4e-9;
};

/// 1-based undecimated levels whose nominal pass-band
/// [1/(2^(j+1) dt), 1/(2^j dt)] intersects the configured signal band.
std::vector<int> levels_in_band(const WaveletCorrelationSpec& spec);

/// Undecimated wavelet decomposition of both inputs; per-level detail
/// correlations over the in-band levels are combined with weights
/// |Wx_j| |Wy_j|, which keeps coefficients in [-1, 1].
/// Throws std::invalid_argument when no level intersects the band.
CorrelationSeries cc_wavelet(std::span<const double> x, std::span<const double> y, const WaveletBasis& basis,
                             const WaveletCorrelationSpec& spec = {});

enum class InterpMethod { none, linear, cubic };

struct InterpSpec {
  InterpMethod method = InterpMethod::none;
  int factor = 1;
};

/// Parses `none`, `linear:<f>`, `cubic:<f>` with f in {1, 2, 4, 8}.
InterpSpec parse_interp(std::string_view text);
std::string interp_name(const InterpSpec& spec);
std::string interp_method_name(InterpMethod m);

/// Half-width, in integer lags, of the neighbourhood resampled around the peak.
inline constexpr std::ptrdiff_t kRefineHalfWidth = 8;

/// Integer argmax; ties go to the smallest |lag|, then the smaller lag.
std::size_t peak_index(const CorrelationSeries& series);

/// Fractional lag of the correlation maximum after resampling the
/// +-kRefineHalfWidth neighbourhood at `factor` x density. Factor 1 (or
/// method none) returns the integer argmax.
double refine_peak(const CorrelationSeries& series, const InterpSpec& interp);

enum class Baseline { BC, BD };

inline constexpr double kCenterFrequencyHz = 60e6;

struct TdoaEstimate {
  std::size_t window_index = 0;
  Baseline baseline = Baseline::BC;
  double fractional_lag = 0.0;
  double tau_s = 0.0;
  double peak_coefficient = 0.0;
  double phase_rad = 0.0;
};

struct LagConversion {
  double tau_s;
  double phase_rad;
};

/// tau = lag * dt; phase = 2 pi f tau. Throws when dt or f is not positive.
LagConversion lag_to_tdoa(double lag, double dt, double frequency_hz = kCenterFrequencyHz);

struct CorrelationOptions {
  Method method = Method::cctd;
  std::string wavelet = "sym4";
  WaveletCorrelationSpec wavelet_spec;
};

CorrelationSeries correlate(std::span<const double> x, std::span<const double> y, const CorrelationOptions& options);

}  // namespace itfmap::xcorr
