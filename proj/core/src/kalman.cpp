#include <cmath>
#include <stdexcept>

#include "itfmap/denoise.hpp"

namespace itfmap::denoise {

KalmanTrace kalman_trace(std::span<const double> signal, double q, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("Kalman measurement variance r must be > 0");
  if (!(q >= 0.0)) throw std::invalid_argument("Kalman process variance q must be >= 0");
  KalmanTrace t;
  const std::size_t n = signal.size();
  t.estimate.resize(n);
  t.gain.resize(n);
  t.posterior_var.resize(n);
  if (n == 0) return t;

  // Diffuse prior: the first update takes the observation with gain 1.
  double x = signal[0];
  double p = r;
  t.estimate[0] = x;
  t.gain[0] = 1.0;
  t.posterior_var[0] = p;
  for (std::size_t k = 1; k < n; ++k) {
    const double predicted = p + q;
    const double gain = predicted / (predicted + r);
    x += gain * (signal[k] - x);
    p = (1.0 - gain) * predicted;
    t.estimate[k] = x;
    t.gain[k] = gain;
    t.posterior_var[k] = p;
  }
  return t;
}

std::vector<double> kalman_filter(std::span<const double> signal, double q, double r) {
  return kalman_trace(signal, q, r).estimate;
}

std::vector<double> kalman_filter(std::span<const double> signal, const KalmanSpec& spec) {
  double r = 0.0;
  if (spec.measurement_var) {
    r = *spec.measurement_var;
  } else if (signal.size() >= 2) {
    double mean = 0.0;
    for (std::size_t k = 1; k < signal.size(); ++k) mean += signal[k] - signal[k - 1];
    mean /= static_cast<double>(signal.size() - 1);
    double var = 0.0;
    for (std::size_t k = 1; k < signal.size(); ++k) {
      const double d = signal[k] - signal[k - 1] - mean;
      var += d * d;
    }
    var /= static_cast<double>(signal.size() - 1);
    r = var / 2.0;
  }
  if (!(r > 0.0)) {
    // Flat or too-short input: nothing to smooth.
    if (!spec.measurement_var) return {signal.begin(), signal.end()};
  }
  const double q = spec.process_var.value_or(r / 100.0);
  return kalman_filter(signal, q, r);
}

}  // namespace itfmap::denoise
