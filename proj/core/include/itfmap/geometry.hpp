#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace itfmap::geometry {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Two orthogonal baselines of equal length sharing antenna B: BD lies on
/// the azimuth reference axis (0 deg) and BC at +90 deg (counterclockwise).
struct ArrayGeometry {
  double baseline_m = 15.0;
  double propagation_speed = kSpeedOfLight;

  double transit_time() const { return baseline_m / propagation_speed; }
  /// Throws std::invalid_argument unless both fields are positive.
  void validate() const;
};

struct Direction {
  double azimuth_deg = 0.0;    // [0, 360)
  double elevation_deg = 0.0;  // [0, 90]
};

struct DirectionEstimate {
  std::size_t window_index = 0;
  std::optional<Direction> direction;  // empty when the transit gate fails
  double gate = 0.0;                   // (c/d) sqrt(tau1^2 + tau2^2)
  bool at_zenith = false;
  bool degenerate = false;             // a constant input segment; no correlation ran
  double peak_coefficient = 0.0;

  bool valid() const { return direction.has_value(); }
};

/// Gate values in (1, 1 + kGateTolerance] are clamped to 1.
inline constexpr double kGateTolerance = 1e-12;

/// tau1 is the BC time difference, tau2 the BD one (seconds, signed).
DirectionEstimate direction_from_tdoa(double tau1_s, double tau2_s, const ArrayGeometry& geom);

struct TdoaPair {
  double tau1_s = 0.0;  // BC
  double tau2_s = 0.0;  // BD
};

/// Inverse of direction_from_tdoa. Throws std::invalid_argument when the
/// elevation is outside [0, 90].
TdoaPair tdoa_from_direction(double azimuth_deg, double elevation_deg, const ArrayGeometry& geom);

/// Wraps an angle to [0, 360).
double wrap_azimuth(double deg);
/// Wraps an angle difference to (-180, 180].
double wrap_residual(double deg);

/// Map CSV: `window_index,time_s,azimuth_deg,elevation_deg,peak_coeff,valid`.
/// Invalid rows leave the angle fields empty. `comments` become leading
/// `# ` lines. `times_s` holds one timestamp per estimate.
void write_map_csv(const std::filesystem::path& path, const std::vector<DirectionEstimate>& estimates,
                   const std::vector<double>& times_s, const std::vector<std::string>& comments = {});

struct MapRow {
  std::size_t window_index = 0;
  double time_s = 0.0;
  std::optional<Direction> direction;
  double peak_coefficient = 0.0;
};

/// Reads a map CSV written by write_map_csv. Throws std::runtime_error on
/// unreadable or malformed input.
std::vector<MapRow> read_map_csv(const std::filesystem::path& path);

}  // namespace itfmap::geometry
