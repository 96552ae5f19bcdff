#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itfmap {

/// Orthogonal wavelet filter bank. Only the decomposition low-pass is
/// stored; the high-pass is its alternating flip and synthesis uses the
/// transposed (time-reversed) pair.
class WaveletBasis {
 public:
  /// Accepts "sym4", "coif5", "db10", "fk14" (case-insensitive) and the
  /// family-only alias "coif" for coif5. Throws std::invalid_argument for
  /// anything else.
  static WaveletBasis from_name(std::string_view name);
  static std::vector<std::string> available();

  const std::string& name() const { return name_; }
  std::span<const double> lowpass() const { return lowpass_; }
  std::span<const double> highpass() const { return highpass_; }
  std::size_t length() const { return lowpass_.size(); }

 private:
  WaveletBasis(std::string name, std::vector<double> lowpass);

  std::string name_;
  std::vector<double> lowpass_;
  std::vector<double> highpass_;
};

/// Multi-level decimated DWT with periodic extension. `details[0]` is the
/// finest level. `padded_length` records the length after odd-length
/// padding so reconstruction can trim back.
struct DwtDecomposition {
  std::vector<double> approximation;
  std::vector<std::vector<double>> details;
  std::vector<std::size_t> level_lengths;  // input length at each level
  std::size_t original_length = 0;
};

/// Throws std::invalid_argument when signal.size() < 2^levels or levels < 1.
DwtDecomposition dwt(std::span<const double> signal, const WaveletBasis& basis, int levels);
std::vector<double> idwt(const DwtDecomposition& decomposition, const WaveletBasis& basis);

/// Undecimated (MODWT-style, circular) detail coefficients for levels 1..levels.
/// Each level has the same length as the input.
std::vector<std::vector<double>> modwt_details(std::span<const double> signal,
                                               const WaveletBasis& basis, int levels);

}  // namespace itfmap
