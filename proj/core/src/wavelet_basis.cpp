#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "itfmap/wavelet.hpp"

namespace itfmap {
namespace {

// Scaling (low-pass) filters, normalized to sum sqrt(2). sym4, coif5 and
// db10 are the standard published banks. fk14 is built from the degree-6
// Fejer-Korovkin kernel: the transition band of |m0|^2 follows the kernel
// centred on the half-band point, followed by a minimum-phase spectral
// factorization (computed offline in 80-digit arithmetic).
constexpr double kSym4[] = {
    0.0322231006040427, -0.012603967262037833, -0.09921954357684722,
    0.29785779560527736, 0.8037387518059161, 0.49761866763201545,
    -0.02963552764599851, -0.07576571478927333,
};
constexpr double kCoif5[] = {
    -0.000212081862067494, 0.0003585777411617577, 0.0021782943778456947,
    -0.00415931262757864, -0.010131584846900276, 0.023408322118927783,
    0.028169744270532353, -0.09192158806008609, -0.052046670253554764,
    0.42157126673075435, 0.7742936228603274, 0.4379823066591634,
    -0.06203775157498196, -0.10556315130733723, 0.041287530472117834,
    0.032674799467057355, -0.019758391600965465, -0.009159507338676163,
    0.006761520220620417, 0.0024315754425382886, -0.0016616273039298788,
    -0.0006375589261258812, 0.0003018579416682448, 0.00014035632812373243,
    -4.12198619242655e-05, -2.1270221672515614e-05, 3.7007277113394796e-06,
    2.0612203985788783e-06, -1.6237995172048338e-07, -9.604010112767894e-08,
};
constexpr double kDb10[] = {
    0.026670057900555554, 0.1881768000776915, 0.5272011889317256,
    0.6884590394536035, 0.2811723436605775, -0.24984642432731538,
    -0.19594627437737705, 0.12736934033579325, 0.09305736460357235,
    -0.07139414716639708, -0.029457536821875813, 0.033212674059341,
    0.0036065535669561697, -0.010733175483330575, 0.001395351747052901,
    0.001992405295185056, -0.0006858566949597116, -0.00011646685512928545,
    9.358867032006959e-05, -1.3264202894521244e-05,
};
constexpr double kFk14[] = {
    0.2603717693037009, 0.686891477246636, 0.6115546539472099,
    0.05142165412892757, -0.2456139281610015, -0.048575339077288754,
    0.12428256092000188, 0.02222673961876614, -0.06399737303879399,
    -0.005074372547497621, 0.029779711589290988, -0.0032974791532950297,
    -0.009270613373860545, 0.0035141009702991523,
};

struct Entry {
  const char* name;
  const double* begin;
  const double* end;
};

constexpr Entry kTable[] = {
    {"sym4", std::begin(kSym4), std::end(kSym4)},
    {"coif5", std::begin(kCoif5), std::end(kCoif5)},
    {"db10", std::begin(kDb10), std::end(kDb10)},
    {"fk14", std::begin(kFk14), std::end(kFk14)},
};

}  // namespace

WaveletBasis::WaveletBasis(std::string name, std::vector<double> lowpass)
    : name_(std::move(name)), lowpass_(std::move(lowpass)), highpass_(lowpass_.size()) {
  const std::size_t n = lowpass_.size();
  for (std::size_t j = 0; j < n; ++j) {
    highpass_[j] = (j % 2 == 0 ? 1.0 : -1.0) * lowpass_[n - 1 - j];
  }
}

WaveletBasis WaveletBasis::from_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  if (key == "coif") key = "coif5";
  for (const auto& e : kTable) {
    if (key == e.name) return WaveletBasis(e.name, std::vector<double>(e.begin, e.end));
  }
  throw std::invalid_argument("unknown wavelet basis: " + std::string(name));
}

std::vector<std::string> WaveletBasis::available() {
  std::vector<std::string> names;
  for (const auto& e : kTable) names.emplace_back(e.name);
  return names;
}

}  // namespace itfmap
