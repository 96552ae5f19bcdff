#include "itfmap/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "text_util.hpp"

namespace itfmap::simulate {
namespace {

using geometry::Direction;

double clip_elevation(double el) { return std::clamp(el, 0.0, 90.0); }

/// Circular mean of the azimuths and arithmetic mean of the elevations.
Direction centroid(const std::vector<Direction>& pts) {
  double sx = 0.0, sy = 0.0, el = 0.0;
  for (const auto& p : pts) {
    sx += std::cos(p.azimuth_deg * std::numbers::pi / 180.0);
    sy += std::sin(p.azimuth_deg * std::numbers::pi / 180.0);
    el += p.elevation_deg;
  }
  Direction c;
  c.azimuth_deg = (sx == 0.0 && sy == 0.0) ? 0.0 : geometry::wrap_azimuth(std::atan2(sy, sx) * 180.0 / std::numbers::pi);
  c.elevation_deg = el / static_cast<double>(pts.size());
  return c;
}

/// Applies exp(-i 2 pi f delay) to a spectrum of a length-n real signal.
void phase_ramp(std::vector<std::complex<double>>& spec, std::size_t n, double delay) {
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) * delay / static_cast<double>(n);
    spec[k] *= std::polar(1.0, angle);
  }
  // The Nyquist bin of an even-length real signal must stay real.
  if (n % 2 == 0) spec.back() = std::real(spec.back());
}

std::vector<double> delay_span(std::span<const double> ref, std::size_t begin, std::size_t end, double delay) {
  const std::size_t lo = begin >= kDelayMargin ? begin - kDelayMargin : 0;
  const std::size_t pre = begin - lo;
  const std::size_t m = detail::next_pow2(end - begin + 2 * kDelayMargin);
  const detail::RealFft fft(m);
  std::vector<double> buf(m, 0.0);
  const std::size_t hi = std::min(ref.size(), end + kDelayMargin);
  std::copy(ref.begin() + static_cast<std::ptrdiff_t>(lo), ref.begin() + static_cast<std::ptrdiff_t>(hi), buf.begin());
  auto spec = fft.forward(buf);
  phase_ramp(spec, m, delay);
  const auto shifted = fft.inverse(spec);
  return {shifted.begin() + static_cast<std::ptrdiff_t>(pre),
          shifted.begin() + static_cast<std::ptrdiff_t>(pre + end - begin)};
}

/// Zeroes every bin outside [low_hz, high_hz] and rescales to unit RMS.
std::vector<double> limit_band(std::span<const double> x, double dt, double low_hz, double high_hz) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!(low_hz >= 0.0 && low_hz < high_hz && high_hz <= 0.5 / dt)) {
    throw std::invalid_argument("signal band must satisfy 0 <= low < high <= Nyquist");
  }
  const std::size_t n = x.size();
  const detail::RealFft fft(n);
  auto spec = fft.forward(x);
  const double df = 1.0 / (static_cast<double>(n) * dt);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < low_hz || f > high_hz) spec[k] = 0.0;
  }
  auto out = fft.inverse(spec);
  double power = 0.0;
  for (double v : out) power += v * v;
  power /= static_cast<double>(n);
  if (!(power > 0.0)) throw std::invalid_argument("signal band holds no frequency bins at this length");
  const double scale = 1.0 / std::sqrt(power);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

std::size_t AngleTrack::record_length() const {
  if (points.empty()) return 0;
  return (points.size() - 1) * hop + window_length;
}

TrackKind parse_track_kind(std::string_view text) {
  std::string s(text);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "constant") return TrackKind::constant;
  if (s == "linear-sweep" || s == "linear") return TrackKind::linear_sweep;
  if (s == "random-walk" || s == "random") return TrackKind::random_walk;
  throw std::invalid_argument("unknown track kind '" + std::string(text) + "' (constant, linear-sweep, random-walk)");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

AngleTrack make_track(TrackKind kind, std::size_t n, const TrackParams& p, std::uint64_t seed,
                      std::size_t window_length, std::size_t hop) {
  if (n == 0) throw std::invalid_argument("track needs at least one window");
  if (window_length < 2 || hop == 0) throw std::invalid_argument("track window geometry needs W >= 2 and hop >= 1");
  if (!(p.elevation_min_deg >= 0.0 && p.elevation_max_deg <= 90.0 && p.elevation_min_deg <= p.elevation_max_deg)) {
    throw std::invalid_argument("track elevation bounds must lie in [0, 90]");
  }
  const auto clip = [&](double el) { return std::clamp(el, p.elevation_min_deg, p.elevation_max_deg); };

  AngleTrack track;
  track.window_length = window_length;
  track.hop = hop;
  track.points.reserve(n);
  switch (kind) {
    case TrackKind::constant:
      track.points.assign(n, Direction{geometry::wrap_azimuth(p.azimuth_start_deg), clip(p.elevation_start_deg)});
      break;
    case TrackKind::linear_sweep:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        const double az = p.azimuth_start_deg + t * (p.azimuth_end_deg - p.azimuth_start_deg);
        const double el = p.elevation_start_deg + t * (p.elevation_end_deg - p.elevation_start_deg);
        track.points.push_back({geometry::wrap_azimuth(az), clip(el)});
      }
      break;
    case TrackKind::random_walk: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> step(0.0, p.step_sigma_deg);
      double az = p.azimuth_start_deg;
      double el = clip(p.elevation_start_deg);
      for (std::size_t i = 0; i < n; ++i) {
        track.points.push_back({geometry::wrap_azimuth(az), el});
        az += step(rng);
        el = clip(el + step(rng));
      }
      break;
    }
  }
  return track;
}

AngleTrack augment_track(const AngleTrack& track, const AugmentSpec& spec) {
  if (track.points.empty()) throw std::invalid_argument("cannot augment an empty track");
  if (!(spec.scale_factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
  if (!(spec.noise_sigma_deg >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");

  AngleTrack out = track;
  if (spec.noise_sigma_deg > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> eps(0.0, spec.noise_sigma_deg);
    for (auto& p : out.points) {
      p.elevation_deg = clip_elevation(p.elevation_deg + eps(rng));
      if (spec.noise_on_azimuth) p.azimuth_deg = geometry::wrap_azimuth(p.azimuth_deg + eps(rng));
    }
  }
  if (spec.scale_factor != 1.0) {
    const Direction c = centroid(out.points);
    for (auto& p : out.points) {
      p.azimuth_deg = geometry::wrap_azimuth(c.azimuth_deg +
                                             spec.scale_factor * geometry::wrap_residual(p.azimuth_deg - c.azimuth_deg));
      p.elevation_deg = clip_elevation(c.elevation_deg + spec.scale_factor * (p.elevation_deg - c.elevation_deg));
    }
  }
  if (spec.flip) {
    for (auto& p : out.points) p.azimuth_deg = geometry::wrap_azimuth(p.azimuth_deg + 180.0);
  }
  return out;
}

std::vector<double> fractional_delay(std::span<const double> signal, double delay_samples) {
  if (signal.empty()) return {};
  if (delay_samples == 0.0) return {signal.begin(), signal.end()};
  const detail::RealFft fft(signal.size());
  auto spec = fft.forward(signal);
  phase_ramp(spec, signal.size(), delay_samples);
  return fft.inverse(spec);
}

SimulatedRecord synthesize_record(std::span<const double> reference, const AngleTrack& track,
                                  const geometry::ArrayGeometry& geom, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (track.points.empty()) throw std::invalid_argument("track is empty");
  if (track.hop == 0 || track.window_length < 2) throw std::invalid_argument("track window geometry is invalid");
  const std::size_t length = track.record_length();
  if (reference.size() < length) {
    throw std::invalid_argument("reference too short: " + std::to_string(length) + " samples needed for " +
                                std::to_string(track.size()) + " windows, got " + std::to_string(reference.size()));
  }
  const auto ref = reference.first(length);

  SimulatedRecord sim;
  sim.truth = track;
  sim.record.sample_interval = dt;
  sim.record.label = "simulated";
  auto& b = sim.record.channel(Channel::B);
  auto& c = sim.record.channel(Channel::C);
  auto& d = sim.record.channel(Channel::D);
  b.assign(ref.begin(), ref.end());
  c.assign(length, 0.0);
  d.assign(length, 0.0);

  sim.tdoa.reserve(track.size());
  for (std::size_t i = 0; i < track.size(); ++i) {
    const auto& p = track.points[i];
    const auto pair = geometry::tdoa_from_direction(p.azimuth_deg, p.elevation_deg, geom);
    sim.tdoa.push_back(pair);
    const std::size_t begin = i * track.hop;
    const std::size_t end = i + 1 == track.size() ? length : begin + track.hop;
    for (auto [target, tau] : {std::pair{&c, pair.tau1_s}, std::pair{&d, pair.tau2_s}}) {
      if (tau == 0.0) {
        std::copy(ref.begin() + static_cast<std::ptrdiff_t>(begin), ref.begin() + static_cast<std::ptrdiff_t>(end),
                  target->begin() + static_cast<std::ptrdiff_t>(begin));
      } else {
        const auto shifted = delay_span(ref, begin, end, tau / dt);
        std::copy(shifted.begin(), shifted.end(), target->begin() + static_cast<std::ptrdiff_t>(begin));
      }
    }
  }
  return sim;
}

std::vector<double> band_limited_noise(std::size_t n, double dt, double low_hz, double high_hz, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("noise length must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = gauss(rng);
  return limit_band(white, dt, low_hz, high_hz);
}

std::vector<double> burst_reference(std::size_t n, double dt, const ReferenceSpec& spec, std::uint64_t seed) {
  if (!(spec.mean_burst_spacing_s > 0.0 && spec.burst_width_min_s > 0.0 &&
        spec.burst_width_min_s <= spec.burst_width_max_s && spec.floor >= 0.0)) {
    throw std::invalid_argument("invalid burst reference parameters");
  }
  auto carrier = band_limited_noise(n, dt, spec.low_hz, spec.high_hz, derive_seed(seed, 0));
  std::mt19937_64 rng(derive_seed(seed, 1));
  std::exponential_distribution<double> gap(dt / spec.mean_burst_spacing_s);
  std::uniform_real_distribution<double> width(spec.burst_width_min_s / dt, spec.burst_width_max_s / dt);
  std::lognormal_distribution<double> amplitude(0.0, 0.7);
  std::vector<double> envelope(n, spec.floor);
  const auto len = static_cast<double>(n);
  for (double t = gap(rng); t < len; t += gap(rng)) {
    const double w = width(rng);
    const double a = amplitude(rng);
    const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(t - 5.0 * w)));
    const auto hi = static_cast<std::size_t>(std::min(len, std::ceil(t + 5.0 * w)));
    for (std::size_t i = lo; i < hi; ++i) {
      const double u = (static_cast<double>(i) - t) / w;
      envelope[i] += a * std::exp(-0.5 * u * u);
    }
  }
  for (std::size_t i = 0; i < n; ++i) carrier[i] *= envelope[i];
  return limit_band(carrier, dt, spec.low_hz, spec.high_hz);
}

std::vector<double> add_awgn(std::span<const double> signal, double snr_db, std::uint64_t seed) {
  std::vector<double> out(signal.begin(), signal.end());
  if (std::isinf(snr_db) && snr_db > 0.0) return out;
  if (std::isnan(snr_db)) throw std::invalid_argument("SNR must be a number");
  double power = 0.0;
  for (double v : signal) power += v * v;
  if (!signal.empty()) power /= static_cast<double>(signal.size());
  if (!(power > 0.0)) throw std::invalid_argument("cannot add noise at a finite SNR to a zero-power signal");
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& v : out) v += gauss(rng);
  return out;
}

void add_channel_noise(SampleRecord& record, double snr_db, std::uint64_t seed) {
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    record.channels[c] = add_awgn(record.channels[c], snr_db, derive_seed(seed, c));
  }
}

std::filesystem::path truth_path_for(const std::filesystem::path& record_path) {
  return record_path.parent_path() / (record_path.stem().string() + ".truth.csv");
}

void write_truth_csv(const std::filesystem::path& path, const SimulatedRecord& sim) {
  if (sim.tdoa.size() != sim.truth.size()) throw std::invalid_argument("truth track and delays differ in length");
  std::string out;
  out += "# window=" + std::to_string(sim.truth.window_length) + "\n";
  out += "# hop=" + std::to_string(sim.truth.hop) + "\n";
  out += "window_index,az_deg,el_deg,tau1_s,tau2_s\n";
  for (std::size_t i = 0; i < sim.truth.size(); ++i) {
    const auto& p = sim.truth.points[i];
    out += std::to_string(i) + "," + detail::format_double(p.azimuth_deg) + "," +
           detail::format_double(p.elevation_deg) + "," + detail::format_double(sim.tdoa[i].tau1_s) + "," +
           detail::format_double(sim.tdoa[i].tau2_s) + "\n";
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write truth file: " + path.string());
  f << out;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

TruthFile read_truth_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open truth file: " + path.string());
  TruthFile truth;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  const auto bad = [&](const std::string& what) {
    return std::runtime_error("truth file " + path.string() + " line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(f, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto kv = detail::trim(body.substr(1));
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = detail::trim(kv.substr(0, eq));
      const auto value = detail::parse_double(kv.substr(eq + 1));
      if (key == "window" && value) truth.track.window_length = static_cast<std::size_t>(*value);
      if (key == "hop" && value) truth.track.hop = static_cast<std::size_t>(*value);
      continue;
    }
    if (!header_seen) {
      if (body.rfind("window_index", 0) != 0) throw bad("missing column header");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(body, ',');
    if (fields.size() != 5) throw bad("expected 5 fields");
    double v[5];
    for (std::size_t k = 0; k < 5; ++k) {
      const auto parsed = detail::parse_double(fields[k]);
      if (!parsed) throw bad("bad number");
      v[k] = *parsed;
    }
    if (static_cast<std::size_t>(v[0]) != truth.track.size()) throw bad("window indices must be consecutive from 0");
    truth.track.points.push_back({v[1], v[2]});
    truth.tdoa.push_back({v[3], v[4]});
  }
  if (!header_seen || truth.track.points.empty()) throw std::runtime_error("truth file has no rows: " + path.string());
  return truth;
}

}  // namespace itfmap::simulate
