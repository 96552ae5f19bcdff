#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itfmap/denoise.hpp"

namespace itfmap::denoise {
namespace {

double median_abs(std::span<const double> v) {
  std::vector<double> a(v.size());
  std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
  const std::size_t mid = a.size() / 2;
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
  if (a.size() % 2 == 1) return a[mid];
  const double upper = a[mid];
  const double lower = *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void soft_threshold(std::vector<double>& coeffs, double threshold) {
  if (threshold <= 0.0) return;
  for (double& c : coeffs) {
    const double mag = std::abs(c) - threshold;
    c = mag > 0.0 ? std::copysign(mag, c) : 0.0;
  }
}

}  // namespace

double sure_threshold(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  std::vector<double> sq(n);
  std::transform(x.begin(), x.end(), sq.begin(), [](double v) { return v * v; });
  std::sort(sq.begin(), sq.end());

  double best_risk = static_cast<double>(n);  // t = 0
  double best_t2 = 0.0;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cumulative += sq[k];
    const double risk = static_cast<double>(n) - 2.0 * static_cast<double>(k + 1) + cumulative +
                        static_cast<double>(n - k - 1) * sq[k];
    if (risk < best_risk) {
      best_risk = risk;
      best_t2 = sq[k];
    }
  }
  return std::sqrt(best_t2);
}

std::vector<double> wavelet_denoise(std::span<const double> signal, const WaveletBasis& basis, int levels,
                                    ThresholdRule rule) {
  auto dec = dwt(signal, basis, levels);
  if (rule != ThresholdRule::none) {
    const double universal = std::sqrt(2.0 * std::log(static_cast<double>(signal.size())));
    for (auto& detail : dec.details) {
      const double sigma = median_abs(detail) / 0.6745;
      if (!(sigma > 0.0)) continue;
      double threshold = 0.0;
      if (rule == ThresholdRule::universal) {
        threshold = sigma * universal;
      } else {
        std::vector<double> normalized(detail.size());
        std::transform(detail.begin(), detail.end(), normalized.begin(),
                       [sigma](double d) { return d / sigma; });
        threshold = sigma * sure_threshold(normalized);
      }
      soft_threshold(detail, threshold);
    }
  }
  return idwt(dec, basis);
}

}  // namespace itfmap::denoise
