#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "itfmap/denoise.hpp"

namespace itfmap::denoise {
namespace {

using cplx = std::complex<double>;

void check_spec(const BandpassSpec& spec, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (spec.order < 2 || spec.order % 2 != 0) {
    throw std::invalid_argument("band-pass order must be even and >= 2");
  }
  const double nyquist = 0.5 / dt;
  if (!(spec.low_hz > 0.0 && spec.low_hz < spec.high_hz && spec.high_hz < nyquist)) {
    throw std::invalid_argument("band-pass cut-offs must satisfy 0 < low < high < Nyquist (" +
                                std::to_string(nyquist) + " Hz)");
  }
}

cplx section_response(const Biquad& s, cplx zinv) {
  return (s.b0 + s.b1 * zinv + s.b2 * zinv * zinv) / (1.0 + s.a1 * zinv + s.a2 * zinv * zinv);
}

cplx design_response(const BandpassDesign& d, double omega) {
  const cplx zinv = std::polar(1.0, -omega);
  cplx h = 1.0;
  for (const auto& s : d.sections) h *= section_response(s, zinv);
  return h;
}

/// Runs the cascade in place; `state` holds (z1, z2) per section.
void run_cascade(const BandpassDesign& d, std::vector<double>& x, std::vector<std::array<double, 2>> state) {
  for (std::size_t k = 0; k < d.sections.size(); ++k) {
    const auto& s = d.sections[k];
    double z1 = state[k][0];
    double z2 = state[k][1];
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

/// Per-section state that makes a constant input `u` a steady state.
std::vector<std::array<double, 2>> steady_state(const BandpassDesign& d, double u) {
  std::vector<std::array<double, 2>> zi(d.sections.size());
  for (std::size_t k = 0; k < d.sections.size(); ++k) {
    const auto& s = d.sections[k];
    const double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    zi[k] = {(g - s.b0) * u, (s.b2 - s.a2 * g) * u};
    u *= g;
  }
  return zi;
}

}  // namespace

BandpassDesign design_bandpass(const BandpassSpec& spec, double dt) {
  check_spec(spec, dt);
  const int proto_order = spec.order / 2;
  // Bilinear transform s = (z - 1) / (z + 1) with prewarped band edges.
  const double wl = std::tan(std::numbers::pi * spec.low_hz * dt);
  const double wh = std::tan(std::numbers::pi * spec.high_hz * dt);
  const double bw = wh - wl;
  const double w0sq = wl * wh;

  std::vector<cplx> zpoles;
  for (int k = 0; k < proto_order; ++k) {
    const cplx p = std::polar(1.0, std::numbers::pi * (2.0 * k + proto_order + 1) / (2.0 * proto_order));
    const cplx disc = std::sqrt(p * p * bw * bw - 4.0 * w0sq);
    for (const cplx s : {(p * bw + disc) / 2.0, (p * bw - disc) / 2.0}) {
      zpoles.push_back((1.0 + s) / (1.0 - s));
    }
  }

  BandpassDesign design;
  std::vector<double> real_poles;
  for (const auto& z : zpoles) {
    if (std::abs(z.imag()) < 1e-14) {
      real_poles.push_back(z.real());
    } else if (z.imag() > 0.0) {
      design.sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    }
  }
  std::sort(real_poles.begin(), real_poles.end());
  for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
    design.sections.push_back(
        {1.0, 0.0, -1.0, -(real_poles[i] + real_poles[i + 1]), real_poles[i] * real_poles[i + 1]});
  }
  if (design.sections.size() != static_cast<std::size_t>(proto_order)) {
    throw std::logic_error("band-pass pole pairing failed");
  }

  const double centre = 2.0 * std::atan(std::sqrt(w0sq));
  const double gain = 1.0 / std::abs(design_response(design, centre));
  const double per_section = std::pow(gain, 1.0 / static_cast<double>(design.sections.size()));
  for (auto& s : design.sections) {
    s.b0 *= per_section;
    s.b1 *= per_section;
    s.b2 *= per_section;
  }
  return design;
}

double bandpass_magnitude(const BandpassDesign& design, double freq_hz, double dt) {
  return std::abs(design_response(design, 2.0 * std::numbers::pi * freq_hz * dt));
}

std::vector<double> filter_once(const BandpassDesign& design, std::span<const double> signal) {
  std::vector<double> out(signal.begin(), signal.end());
  run_cascade(design, out, std::vector<std::array<double, 2>>(design.sections.size(), {0.0, 0.0}));
  return out;
}

std::vector<double> bandpass_filter(std::span<const double> signal, const BandpassSpec& spec, double dt) {
  const auto design = design_bandpass(spec, dt);
  const std::size_t n = signal.size();
  if (n == 0) return {};
  const std::size_t pad = std::min<std::size_t>(n - 1, 3 * (2 * design.sections.size() + 1));

  std::vector<double> x;
  x.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) x.push_back(2.0 * signal[0] - signal[i]);
  x.insert(x.end(), signal.begin(), signal.end());
  for (std::size_t i = 1; i <= pad; ++i) x.push_back(2.0 * signal[n - 1] - signal[n - 1 - i]);

  run_cascade(design, x, steady_state(design, x.front()));
  std::reverse(x.begin(), x.end());
  run_cascade(design, x, steady_state(design, x.front()));
  std::reverse(x.begin(), x.end());
  return {x.begin() + static_cast<std::ptrdiff_t>(pad), x.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace itfmap::denoise
