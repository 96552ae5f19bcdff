#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace itfmap::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  std::vector<double> re(n);
  std::vector<std::complex<double>> sp(n / 2 + 1);
  auto* spec = reinterpret_cast<fftw_complex*>(sp.data());
  const int size = static_cast<int>(n);
  PlanPair p;
  p.forward = fftw_plan_dft_r2c_1d(size, re.data(), spec, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.inverse = fftw_plan_dft_c2r_1d(size, spec, re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.forward || !p.inverse) throw std::runtime_error("FFTW planning failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FFT size must be >= 2");
  const auto plans = plans_for(n);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
}

std::vector<std::complex<double>> RealFft::forward(std::span<const double> in) const {
  if (in.size() != n_) throw std::invalid_argument("FFT input size mismatch");
  std::vector<double> buf(in.begin(), in.end());
  std::vector<std::complex<double>> out(spectrum_size());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), buf.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> spectrum) const {
  if (spectrum.size() != spectrum_size()) throw std::invalid_argument("FFT spectrum size mismatch");
  // c2r overwrites its input.
  std::vector<std::complex<double>> buf(spectrum.begin(), spectrum.end());
  std::vector<double> out(n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(buf.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace itfmap::detail
