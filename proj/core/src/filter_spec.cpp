#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "itfmap/denoise.hpp"
#include "text_util.hpp"

namespace itfmap::denoise {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void bad(std::string_view text, std::string_view why) {
  throw std::invalid_argument("invalid filter '" + std::string(text) + "': " + std::string(why));
}

std::string mhz(double hz) {
  const double v = hz / 1e6;
  return std::abs(v - std::round(v)) < 1e-9 ? std::to_string(static_cast<long long>(std::round(v)))
                                              : detail::format_double(v);
}

}  // namespace

FilterSpec parse_filter(std::string_view text) {
  const std::string s = lower(detail::trim(text));
  if (s == "none") return PassThrough{};
  if (s == "bpf") return BandpassSpec{};
  if (s.rfind("bpf:", 0) == 0) {
    const auto band = detail::split(std::string_view(s).substr(4), '-');
    if (band.size() != 2) bad(text, "expected bpf:<low>-<high> in MHz");
    const auto lo = detail::parse_double(band[0]);
    const auto hi = detail::parse_double(band[1]);
    if (!lo || !hi) bad(text, "band edges must be numbers");
    return BandpassSpec{4, *lo * 1e6, *hi * 1e6};
  }
  if (s == "kf") return KalmanSpec{};
  if (s.rfind("kf:", 0) == 0) {
    const auto parts = detail::split(std::string_view(s).substr(3), ',');
    if (parts.size() != 2) bad(text, "expected kf:<q>,<r>");
    const auto q = detail::parse_double(parts[0]);
    const auto r = detail::parse_double(parts[1]);
    if (!q || !r) bad(text, "variances must be numbers");
    return KalmanSpec{*q, *r};
  }
  if (s.rfind("wt-", 0) == 0) {
    const auto parts = detail::split(std::string_view(s).substr(3), '-');
    if (parts.size() != 2) bad(text, "expected wt-<basis>-<sure|universal>");
    WaveletSpec spec;
    spec.basis = WaveletBasis::from_name(parts[0]).name();
    if (parts[1] == "sure") {
      spec.rule = ThresholdRule::sure;
    } else if (parts[1] == "universal") {
      spec.rule = ThresholdRule::universal;
    } else {
      bad(text, "threshold rule must be sure or universal");
    }
    return spec;
  }
  bad(text, "expected none, bpf, kf or wt-<basis>-<rule>");
}

std::string filter_name(const FilterSpec& spec) {
  return std::visit(
      overloaded{
          [](const PassThrough&) -> std::string { return "none"; },
          [](const BandpassSpec& b) -> std::string {
            const BandpassSpec def;
            if (b.low_hz == def.low_hz && b.high_hz == def.high_hz) return "bpf";
            return "bpf:" + mhz(b.low_hz) + "-" + mhz(b.high_hz);
          },
          [](const KalmanSpec& k) -> std::string {
            if (!k.process_var && !k.measurement_var) return "kf";
            return "kf:" + (k.process_var ? detail::format_double(*k.process_var) : "auto") + "," +
                   (k.measurement_var ? detail::format_double(*k.measurement_var) : "auto");
          },
          [](const WaveletSpec& w) -> std::string {
            const char* rule = w.rule == ThresholdRule::sure        ? "sure"
                               : w.rule == ThresholdRule::universal ? "universal"
                                                                    : "none";
            return "wt-" + w.basis + "-" + rule;
          },
      },
      spec);
}

void validate(const FilterSpec& spec, double dt) {
  std::visit(overloaded{
                 [](const PassThrough&) {},
                 [dt](const BandpassSpec& b) { design_bandpass(b, dt); },
                 [](const KalmanSpec& k) {
                   if (k.measurement_var && !(*k.measurement_var > 0.0)) {
                     throw std::invalid_argument("Kalman measurement variance r must be > 0");
                   }
                   if (k.process_var && !(*k.process_var >= 0.0)) {
                     throw std::invalid_argument("Kalman process variance q must be >= 0");
                   }
                 },
                 [](const WaveletSpec& w) {
                   WaveletBasis::from_name(w.basis);
                   if (w.levels < 1) throw std::invalid_argument("wavelet levels must be >= 1");
                 },
             },
             spec);
}

std::vector<double> apply(const FilterSpec& spec, std::span<const double> signal, double dt) {
  return std::visit(
      overloaded{
          [&](const PassThrough&) { return std::vector<double>(signal.begin(), signal.end()); },
          [&](const BandpassSpec& b) { return bandpass_filter(signal, b, dt); },
          [&](const KalmanSpec& k) { return kalman_filter(signal, k); },
          [&](const WaveletSpec& w) {
            return wavelet_denoise(signal, WaveletBasis::from_name(w.basis), w.levels, w.rule);
          },
      },
      spec);
}

}  // namespace itfmap::denoise
