#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "itfmap/wavelet.hpp"

namespace itfmap::denoise {

/// Butterworth band-pass. `order` is the band-pass filter order (even):
/// order 4 means a 2nd-order low-pass prototype, i.e. two biquad sections.
struct BandpassSpec {
  int order = 4;
  double low_hz = 20e6;
  double high_hz = 100e6;
};

/// Scalar local-level Kalman filter. Unset variances are estimated from the
/// signal: r = var(first differences) / 2, q = r / 100.
struct KalmanSpec {
  std::optional<double> process_var;
  std::optional<double> measurement_var;
};

enum class ThresholdRule { sure, universal, none };

struct WaveletSpec {
  std::string basis = "sym4";
  int levels = 4;
  ThresholdRule rule = ThresholdRule::sure;
};

struct PassThrough {};

using FilterSpec = std::variant<PassThrough, BandpassSpec, KalmanSpec, WaveletSpec>;

/// Parses `none`, `bpf`, `bpf:<low>-<high>` (MHz), `kf`, `kf:<q>,<r>` and
/// `wt-<basis>-<sure|universal>`. Throws std::invalid_argument.
FilterSpec parse_filter(std::string_view text);
/// Canonical selection string, e.g. "wt-sym4-sure" or "bpf:40-80".
std::string filter_name(const FilterSpec& spec);

/// Checks the spec against the sampling interval (cut-offs below Nyquist,
/// variances, known basis). Throws std::invalid_argument.
void validate(const FilterSpec& spec, double dt);

/// Second-order section in transposed direct form II, a0 = 1.
struct Biquad {
  double b0, b1, b2, a1, a2;
};

/// Cascade of sections with the pass-band gain folded in (unity at the
/// geometric centre frequency).
struct BandpassDesign {
  std::vector<Biquad> sections;
};

BandpassDesign design_bandpass(const BandpassSpec& spec, double dt);

/// Single-pass causal filtering with zero initial state.
std::vector<double> filter_once(const BandpassDesign& design, std::span<const double> signal);

/// Zero-phase forward-backward filtering with odd-reflection padding and
/// steady-state initial conditions.
std::vector<double> bandpass_filter(std::span<const double> signal, const BandpassSpec& spec, double dt);

/// Magnitude of one pass of the design at `freq_hz`.
double bandpass_magnitude(const BandpassDesign& design, double freq_hz, double dt);

struct KalmanTrace {
  std::vector<double> estimate;
  std::vector<double> gain;
  std::vector<double> posterior_var;
};

/// Local-level model x_k = x_{k-1} + w, z_k = x_k + v with a diffuse prior:
/// the first output equals the first observation. Throws when r <= 0 or q < 0.
KalmanTrace kalman_trace(std::span<const double> signal, double q, double r);
std::vector<double> kalman_filter(std::span<const double> signal, double q, double r);
std::vector<double> kalman_filter(std::span<const double> signal, const KalmanSpec& spec);

/// Threshold in units of sigma (coefficients already divided by sigma)
/// minimizing Stein's unbiased risk estimate for soft thresholding.
double sure_threshold(std::span<const double> normalized_coefficients);

std::vector<double> wavelet_denoise(std::span<const double> signal, const WaveletBasis& basis, int levels,
                                    ThresholdRule rule);

/// Dispatches on the spec. PassThrough returns a copy.
std::vector<double> apply(const FilterSpec& spec, std::span<const double> signal, double dt);

}  // namespace itfmap::denoise
