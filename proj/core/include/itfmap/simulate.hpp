#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "itfmap/geometry.hpp"
#include "itfmap/signals.hpp"

namespace itfmap::simulate {

/// One (Az, El) pair per window, plus the window geometry it was made for.
struct AngleTrack {
  std::vector<geometry::Direction> points;
  std::size_t window_length = 256;
  std::size_t hop = 1;

  std::size_t size() const { return points.size(); }
  /// Record length that holds exactly size() windows.
  std::size_t record_length() const;
};

enum class TrackKind { constant, linear_sweep, random_walk };

TrackKind parse_track_kind(std::string_view text);

struct TrackParams {
  double azimuth_start_deg = 135.0;
  double elevation_start_deg = 45.0;
  double azimuth_end_deg = 135.0;    // linear sweep only
  double elevation_end_deg = 45.0;   // linear sweep only
  double step_sigma_deg = 0.1;       // random walk only
  double elevation_min_deg = 0.0;
  double elevation_max_deg = 90.0;
};

/// Throws std::invalid_argument when n == 0 or the elevation bounds are not
/// inside [0, 90].
AngleTrack make_track(TrackKind kind, std::size_t n, const TrackParams& params, std::uint64_t seed,
                      std::size_t window_length = 256, std::size_t hop = 1);

struct AugmentSpec {
  double noise_sigma_deg = 1.0;
  bool noise_on_azimuth = false;
  double scale_factor = 1.2;
  bool flip = false;
  std::uint64_t seed = 0;
};

/// Noise, then outward scaling about the centroid, then the 180 degree
/// azimuth flip. Elevations are clipped to [0, 90] after each step.
AngleTrack augment_track(const AngleTrack& track, const AugmentSpec& spec);

struct SimulatedRecord {
  SampleRecord record;
  AngleTrack truth;
  std::vector<geometry::TdoaPair> tdoa;
};

/// Margin, in samples, added on both sides of each owned span before the
/// spectral delay so the owned samples see no wrap-around.
inline constexpr std::size_t kDelayMargin = 256;

/// Channels C and D are copies of `reference` (antenna B) delayed per window
/// by the track's (tau1, tau2). Window i owns samples [i*hop, (i+1)*hop); the
/// last window owns its full span. Throws std::invalid_argument when the
/// reference is too short or dt is not positive.
SimulatedRecord synthesize_record(std::span<const double> reference, const AngleTrack& track,
                                  const geometry::ArrayGeometry& geom, double dt);

/// Circular band-limited delay by `delay_samples` via a linear phase ramp.
std::vector<double> fractional_delay(std::span<const double> signal, double delay_samples);

/// Gaussian noise restricted to [low_hz, high_hz] and scaled to unit RMS.
std::vector<double> band_limited_noise(std::size_t n, double dt, double low_hz, double high_hz, std::uint64_t seed);

/// Impulsive reference: band-limited noise under an envelope of Gaussian
/// bursts at Poisson times, plus a small floor so no stretch is silent.
struct ReferenceSpec {
  double low_hz = 40e6;
  double high_hz = 80e6;
  double mean_burst_spacing_s = 2e-6;
  double burst_width_min_s = 32e-9;
  double burst_width_max_s = 192e-9;
  double floor = 0.02;  // envelope level between bursts, relative to a unit burst
};

/// Result is re-limited to the band and scaled to unit RMS.
std::vector<double> burst_reference(std::size_t n, double dt, const ReferenceSpec& spec, std::uint64_t seed);

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Adds white Gaussian noise with power P_signal / 10^(snr_db/10). An
/// infinite SNR returns the input unchanged. Throws on a zero-power signal.
std::vector<double> add_awgn(std::span<const double> signal, double snr_db, std::uint64_t seed);

/// add_awgn on every channel with a per-channel derived seed.
void add_channel_noise(SampleRecord& record, double snr_db, std::uint64_t seed);

/// Mixes a base seed with a stream index into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// `<dir>/<stem>.truth.csv` next to a record file.
std::filesystem::path truth_path_for(const std::filesystem::path& record_path);

/// Sidecar columns `window_index,az_deg,el_deg,tau1_s,tau2_s`; the window
/// geometry goes into `# window=` and `# hop=` comment lines.
void write_truth_csv(const std::filesystem::path& path, const SimulatedRecord& sim);

struct TruthFile {
  AngleTrack track;
  std::vector<geometry::TdoaPair> tdoa;
};

/// Throws std::runtime_error on unreadable or malformed files.
TruthFile read_truth_csv(const std::filesystem::path& path);

}  // namespace itfmap::simulate
