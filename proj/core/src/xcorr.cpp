#include "itfmap/xcorr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace itfmap::xcorr {
namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation inputs must have equal length");
  if (x.empty()) throw std::invalid_argument("correlation inputs must not be empty");
}

/// Unnormalized zero-padded correlation r[k] = sum_n x[n] y[n+k] via FFT.
std::vector<double> raw_correlation_fft(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const std::size_t m = detail::next_pow2(2 * n - 1);
  const detail::RealFft fft(m);
  std::vector<double> xp(m, 0.0);
  std::vector<double> yp(m, 0.0);
  std::copy(x.begin(), x.end(), xp.begin());
  std::copy(y.begin(), y.end(), yp.begin());
  auto xs = fft.forward(xp);
  const auto ys = fft.forward(yp);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = std::conj(xs[k]) * ys[k];
  const auto circ = fft.inverse(xs);

  std::vector<double> r(2 * n - 1);
  const auto max_lag = static_cast<std::ptrdiff_t>(n) - 1;
  for (std::ptrdiff_t lag = -max_lag; lag <= max_lag; ++lag) {
    const std::size_t src = lag >= 0 ? static_cast<std::size_t>(lag) : m - static_cast<std::size_t>(-lag);
    r[static_cast<std::size_t>(lag + max_lag)] = circ[src];
  }
  return r;
}

}  // namespace

Method parse_method(std::string_view text) {
  std::string s(text);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "cctd") return Method::cctd;
  if (s == "ccfd") return Method::ccfd;
  if (s == "ccwd") return Method::ccwd;
  throw std::invalid_argument("unknown correlation method '" + std::string(text) + "' (cctd, ccfd, ccwd)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::cctd: return "cctd";
    case Method::ccfd: return "ccfd";
    case Method::ccwd: return "ccwd";
  }
  return "?";
}

CorrelationSeries cc_time(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double denom = norm(x) * norm(y);
  if (!(denom > 0.0)) throw std::invalid_argument("degenerate (zero-variance) correlation input");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  CorrelationSeries out;
  out.max_lag = n - 1;
  out.coefficients.resize(static_cast<std::size_t>(2 * n - 1));
  for (std::ptrdiff_t lag = -(n - 1); lag <= n - 1; ++lag) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -lag);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, n - lag);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i + lag)];
    out.coefficients[static_cast<std::size_t>(lag + n - 1)] = s / denom;
  }
  return out;
}

CorrelationSeries cc_freq(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double denom = norm(x) * norm(y);
  if (!(denom > 0.0)) throw std::invalid_argument("degenerate (zero-variance) correlation input");
  CorrelationSeries out;
  out.max_lag = static_cast<std::ptrdiff_t>(x.size()) - 1;
  out.coefficients = raw_correlation_fft(x, y);
  for (double& c : out.coefficients) c /= denom;
  return out;
}

std::vector<int> levels_in_band(const WaveletCorrelationSpec& spec) {
  if (!(spec.dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!(spec.band_low_hz < spec.band_high_hz)) throw std::invalid_argument("wavelet band must have low < high");
  std::vector<int> levels;
  for (int j = 1; j <= spec.levels; ++j) {
    const double upper = 1.0 / (std::ldexp(1.0, j) * spec.dt);
    const double lower = upper / 2.0;
    if (lower < spec.band_high_hz && upper > spec.band_low_hz) levels.push_back(j);
  }
  return levels;
}

CorrelationSeries cc_wavelet(std::span<const double> x, std::span<const double> y, const WaveletBasis& basis,
                             const WaveletCorrelationSpec& spec) {
  check_pair(x, y);
  const auto levels = levels_in_band(spec);
  if (levels.empty()) {
    throw std::invalid_argument("no wavelet level of depth " + std::to_string(spec.levels) +
                                " intersects the signal band");
  }
  if (norm(x) == 0.0 || norm(y) == 0.0) throw std::invalid_argument("degenerate (zero-variance) correlation input");

  auto wx = modwt_details(x, basis, spec.levels);
  auto wy = modwt_details(y, basis, spec.levels);
  // Circularly wrapped coefficients at the start of each level are dropped.
  for (int j = 1; j <= spec.levels; ++j) {
    const std::size_t span = ((std::size_t{1} << j) - 1) * (basis.length() - 1);
    auto& dx = wx[static_cast<std::size_t>(j - 1)];
    auto& dy = wy[static_cast<std::size_t>(j - 1)];
    std::fill_n(dx.begin(), std::min(span, dx.size()), 0.0);
    std::fill_n(dy.begin(), std::min(span, dy.size()), 0.0);
  }

  CorrelationSeries out;
  out.max_lag = static_cast<std::ptrdiff_t>(x.size()) - 1;
  out.coefficients.assign(2 * x.size() - 1, 0.0);
  double weight = 0.0;
  for (int j : levels) {
    const auto& dx = wx[static_cast<std::size_t>(j - 1)];
    const auto& dy = wy[static_cast<std::size_t>(j - 1)];
    const double w = norm(dx) * norm(dy);
    if (w == 0.0) continue;
    const auto raw = raw_correlation_fft(dx, dy);
    for (std::size_t i = 0; i < raw.size(); ++i) out.coefficients[i] += raw[i];
    weight += w;
  }
  if (!(weight > 0.0)) throw std::invalid_argument("degenerate wavelet-domain correlation input");
  for (double& c : out.coefficients) c /= weight;
  return out;
}

LagConversion lag_to_tdoa(double lag, double dt, double frequency_hz) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
  const double tau = lag * dt;
  return {tau, 2.0 * std::numbers::pi * frequency_hz * tau};
}

CorrelationSeries correlate(std::span<const double> x, std::span<const double> y, const CorrelationOptions& options) {
  switch (options.method) {
    case Method::cctd: return cc_time(x, y);
    case Method::ccfd: return cc_freq(x, y);
    case Method::ccwd: return cc_wavelet(x, y, WaveletBasis::from_name(options.wavelet), options.wavelet_spec);
  }
  throw std::invalid_argument("unknown correlation method");
}

}  // namespace itfmap::xcorr
