#include <cmath>
#include <stdexcept>

#include "itfmap/wavelet.hpp"

namespace itfmap {
namespace {

void analysis_step(std::span<const double> x, const WaveletBasis& basis, std::vector<double>& approx,
                   std::vector<double>& detail) {
  const std::size_t n = x.size();  // even
  const auto h = basis.lowpass();
  const auto g = basis.highpass();
  approx.assign(n / 2, 0.0);
  detail.assign(n / 2, 0.0);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double v = x[(2 * k + j) % n];
      a += h[j] * v;
      d += g[j] * v;
    }
    approx[k] = a;
    detail[k] = d;
  }
}

std::vector<double> synthesis_step(std::span<const double> approx, std::span<const double> detail,
                                   const WaveletBasis& basis) {
  const std::size_t n = 2 * approx.size();
  const auto h = basis.lowpass();
  const auto g = basis.highpass();
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < approx.size(); ++k) {
    for (std::size_t j = 0; j < h.size(); ++j) {
      x[(2 * k + j) % n] += h[j] * approx[k] + g[j] * detail[k];
    }
  }
  return x;
}

}  // namespace

DwtDecomposition dwt(std::span<const double> signal, const WaveletBasis& basis, int levels) {
  if (levels < 1) throw std::invalid_argument("wavelet levels must be >= 1");
  if (levels >= 31 || signal.size() < (std::size_t{1} << levels)) {
    throw std::invalid_argument("signal of " + std::to_string(signal.size()) +
                                " samples is too short for " + std::to_string(levels) +
                                " wavelet levels");
  }
  DwtDecomposition out;
  out.original_length = signal.size();
  std::vector<double> current(signal.begin(), signal.end());
  for (int level = 0; level < levels; ++level) {
    // Periodization needs an even length; odd levels repeat the last sample.
    if (current.size() % 2 == 1) current.push_back(current.back());
    out.level_lengths.push_back(current.size());
    std::vector<double> approx;
    std::vector<double> detail;
    analysis_step(current, basis, approx, detail);
    out.details.push_back(std::move(detail));
    current = std::move(approx);
  }
  out.approximation = std::move(current);
  return out;
}

std::vector<double> idwt(const DwtDecomposition& decomposition, const WaveletBasis& basis) {
  std::vector<double> current = decomposition.approximation;
  for (std::size_t level = decomposition.details.size(); level-- > 0;) {
    const auto& detail = decomposition.details[level];
    if (detail.size() != current.size()) {
      // The approximation may carry the odd-length pad of the next level.
      current.resize(detail.size());
    }
    current = synthesis_step(current, detail, basis);
    current.resize(decomposition.level_lengths[level]);
  }
  current.resize(decomposition.original_length);
  return current;
}

std::vector<std::vector<double>> modwt_details(std::span<const double> signal,
                                               const WaveletBasis& basis, int levels) {
  if (levels < 1) throw std::invalid_argument("wavelet levels must be >= 1");
  const std::size_t n = signal.size();
  if (levels >= 31 || n < (std::size_t{1} << levels)) {
    throw std::invalid_argument("signal too short for requested MODWT levels");
  }
  const double scale = 1.0 / std::sqrt(2.0);
  const auto h = basis.lowpass();
  const auto g = basis.highpass();
  std::vector<std::vector<double>> details;
  std::vector<double> v(signal.begin(), signal.end());
  std::vector<double> next(n);
  std::size_t stride = 1;
  for (int level = 0; level < levels; ++level) {
    std::vector<double> w(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      double a = 0.0;
      double d = 0.0;
      for (std::size_t l = 0; l < h.size(); ++l) {
        const std::size_t back = (l * stride) % n;
        const double x = v[(t + n - back) % n];
        a += h[l] * x;
        d += g[l] * x;
      }
      next[t] = a * scale;
      w[t] = d * scale;
    }
    details.push_back(std::move(w));
    v.swap(next);
    stride *= 2;
  }
  return details;
}

}  // namespace itfmap
