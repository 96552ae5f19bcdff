#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "itfmap/xcorr.hpp"
#include "text_util.hpp"

namespace itfmap::xcorr {
namespace {

/// True when candidate (value, lag) beats the incumbent under the
/// max-value, then smallest-|lag|, then smaller-lag ordering.
bool better(double value, double lag, double best_value, double best_lag) {
  if (value != best_value) return value > best_value;
  if (std::abs(lag) != std::abs(best_lag)) return std::abs(lag) < std::abs(best_lag);
  return lag < best_lag;
}

/// Second derivatives of the natural cubic spline through unit-spaced knots.
std::vector<double> natural_spline_moments(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  // Tridiagonal system m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]), m[0] = m[n-1] = 0.
  const std::size_t k = n - 2;
  std::vector<double> diag(k, 4.0), rhs(k);
  for (std::size_t i = 0; i < k; ++i) rhs[i] = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
  for (std::size_t i = 1; i < k; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  m[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
  return m;
}

double spline_eval(std::span<const double> y, std::span<const double> m, std::size_t seg, double t) {
  const double a = 1.0 - t;
  return a * y[seg] + t * y[seg + 1] + ((a * a * a - a) * m[seg] + (t * t * t - t) * m[seg + 1]) / 6.0;
}

}  // namespace

InterpSpec parse_interp(std::string_view text) {
  std::string s(detail::trim(text));
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "none") return {};
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  InterpSpec spec;
  if (name == "linear") {
    spec.method = InterpMethod::linear;
  } else if (name == "cubic") {
    spec.method = InterpMethod::cubic;
  } else {
    throw std::invalid_argument("unknown interpolation '" + std::string(text) + "' (none, linear:<f>, cubic:<f>)");
  }
  if (colon == std::string::npos) throw std::invalid_argument("interpolation needs a factor, e.g. cubic:8");
  const auto f = detail::parse_double(std::string_view(s).substr(colon + 1));
  if (!f || !(*f == 1 || *f == 2 || *f == 4 || *f == 8)) {
    throw std::invalid_argument("interpolation factor must be 1, 2, 4 or 8");
  }
  spec.factor = static_cast<int>(*f);
  return spec;
}

std::string interp_method_name(InterpMethod m) {
  switch (m) {
    case InterpMethod::none: return "none";
    case InterpMethod::linear: return "linear";
    case InterpMethod::cubic: return "cubic";
  }
  return "?";
}

std::string interp_name(const InterpSpec& spec) {
  if (spec.method == InterpMethod::none) return "none";
  return interp_method_name(spec.method) + ":" + std::to_string(spec.factor);
}

std::size_t peak_index(const CorrelationSeries& series) {
  if (series.coefficients.empty()) throw std::invalid_argument("empty correlation series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (better(series.coefficients[i], static_cast<double>(series.lag_at(i)), series.coefficients[best],
               static_cast<double>(series.lag_at(best)))) {
      best = i;
    }
  }
  return best;
}

double refine_peak(const CorrelationSeries& series, const InterpSpec& interp) {
  const std::size_t peak = peak_index(series);
  const double peak_lag = static_cast<double>(series.lag_at(peak));
  if (interp.method == InterpMethod::none || interp.factor <= 1 || series.size() < 2) return peak_lag;

  const auto last = static_cast<std::ptrdiff_t>(series.size()) - 1;
  const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(peak) - kRefineHalfWidth));
  const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(peak) + kRefineHalfWidth));
  const std::span<const double> y(series.coefficients.data() + lo, hi - lo + 1);
  const std::vector<double> moments =
      interp.method == InterpMethod::cubic ? natural_spline_moments(y) : std::vector<double>(y.size(), 0.0);

  double best_value = series.coefficients[peak];
  double best_lag = peak_lag;
  const double step = 1.0 / interp.factor;
  for (std::size_t seg = 0; seg + 1 < y.size(); ++seg) {
    for (int sub = 1; sub < interp.factor; ++sub) {
      const double t = sub * step;
      const double value = spline_eval(y, moments, seg, t);
      const double lag = static_cast<double>(series.lag_at(lo + seg)) + t;
      if (better(value, lag, best_value, best_lag)) {
        best_value = value;
        best_lag = lag;
      }
    }
  }
  return best_lag;
}

}  // namespace itfmap::xcorr
