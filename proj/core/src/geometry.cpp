#include "itfmap/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace itfmap::geometry {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

void ArrayGeometry::validate() const {
  if (!(baseline_m > 0.0) || !std::isfinite(baseline_m)) throw std::invalid_argument("baseline length must be > 0");
  if (!(propagation_speed > 0.0) || !std::isfinite(propagation_speed)) {
    throw std::invalid_argument("propagation speed must be > 0");
  }
}

double wrap_azimuth(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a < 0.0) a += 360.0;
  if (a >= 360.0) a -= 360.0;
  return a;
}

double wrap_residual(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r > 180.0) r -= 360.0;
  if (r <= -180.0) r += 360.0;
  return r;
}

DirectionEstimate direction_from_tdoa(double tau1_s, double tau2_s, const ArrayGeometry& geom) {
  geom.validate();
  DirectionEstimate est;
  const double radius = std::hypot(tau1_s, tau2_s);
  est.gate = radius / geom.transit_time();
  if (!std::isfinite(est.gate) || est.gate > 1.0 + kGateTolerance) return est;

  const double gate = std::min(est.gate, 1.0);
  Direction dir;
  dir.elevation_deg = std::acos(gate) / kDeg;
  if (radius == 0.0) {
    est.at_zenith = true;
    dir.azimuth_deg = 0.0;
  } else {
    dir.azimuth_deg = wrap_azimuth(std::atan2(tau1_s, tau2_s) / kDeg);
  }
  est.direction = dir;
  return est;
}

TdoaPair tdoa_from_direction(double azimuth_deg, double elevation_deg, const ArrayGeometry& geom) {
  geom.validate();
  if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0)) {
    throw std::invalid_argument("elevation must lie in [0, 90] degrees");
  }
  // cos(El) as sin(90 - El) so the zenith gives an exact zero.
  const double radius = geom.transit_time() * std::sin((90.0 - elevation_deg) * kDeg);
  const double az = wrap_azimuth(azimuth_deg);
  // Magnitudes follow tau2 = (d/c) cos El / sqrt(1 + tan^2 Az) and
  // tau1 = tan(Az) tau2; the hemisphere signs are restored from Az. Near
  // Az = 90/270 the limit tau2 -> 0, |tau1| -> (d/c) cos El is used.
  const double c = std::cos(az * kDeg);
  const double s = std::sin(az * kDeg);
  TdoaPair out;
  if (std::abs(c) < 1e-12) {
    out.tau2_s = 0.0;
    out.tau1_s = std::copysign(radius, s);
    return out;
  }
  const double t = s / c;
  const double magnitude2 = radius / std::sqrt(1.0 + t * t);
  out.tau2_s = std::copysign(magnitude2, c);
  out.tau1_s = t * out.tau2_s;
  return out;
}

void write_map_csv(const std::filesystem::path& path, const std::vector<DirectionEstimate>& estimates,
                   const std::vector<double>& times_s, const std::vector<std::string>& comments) {
  if (times_s.size() != estimates.size()) throw std::invalid_argument("one timestamp per estimate is required");
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "window_index,time_s,azimuth_deg,elevation_deg,peak_coeff,valid\n";
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& e = estimates[i];
    out += std::to_string(e.window_index) + "," + detail::format_double(times_s[i]) + ",";
    if (e.direction) {
      out += detail::format_fixed(e.direction->azimuth_deg, 6) + "," +
             detail::format_fixed(e.direction->elevation_deg, 6);
    } else {
      out += ",";
    }
    out += "," + detail::format_fixed(e.peak_coefficient, 6) + "," + (e.valid() ? "1" : "0") + "\n";
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write map file: " + path.string());
  f << out;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<MapRow> read_map_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open map file: " + path.string());
  std::vector<MapRow> rows;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body.rfind("window_index", 0) != 0) throw std::runtime_error("map file lacks the column header");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(body, ',');
    if (fields.size() != 6) throw std::runtime_error("map file line " + std::to_string(line_no) + ": expected 6 fields");
    MapRow row;
    const auto idx = detail::parse_double(fields[0]);
    const auto t = detail::parse_double(fields[1]);
    const auto peak = detail::parse_double(fields[4]);
    if (!idx || !t || !peak) throw std::runtime_error("map file line " + std::to_string(line_no) + ": bad number");
    row.window_index = static_cast<std::size_t>(*idx);
    row.time_s = *t;
    row.peak_coefficient = *peak;
    if (detail::trim(fields[5]) == "1") {
      const auto az = detail::parse_double(fields[2]);
      const auto el = detail::parse_double(fields[3]);
      if (!az || !el) throw std::runtime_error("map file line " + std::to_string(line_no) + ": valid row without angles");
      row.direction = Direction{*az, *el};
    }
    rows.push_back(row);
  }
  if (!header_seen) throw std::runtime_error("map file lacks the column header");
  return rows;
}

}  // namespace itfmap::geometry
