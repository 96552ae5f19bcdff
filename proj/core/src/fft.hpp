#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace itfmap::detail {

/// Real-input DFT of a fixed size backed by FFTW. Plans are cached per size
/// and shared; execute calls are safe from multiple threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  /// `in` must hold size() samples; returns the n/2+1 non-negative bins.
  std::vector<std::complex<double>> forward(std::span<const double> in) const;

  /// Inverse of forward(), including the 1/n scale.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace itfmap::detail
