#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "itfmap/geometry.hpp"
#include "itfmap_cli.hpp"

namespace itfmap::cli {
namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 60, kRight = 20, kTop = 30, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Blue (early) to red (late).
std::string colour(double t) {
  const int r = static_cast<int>(40 + 200 * t);
  const int g = static_cast<int>(60 + 80 * (1.0 - std::abs(2.0 * t - 1.0)));
  const int b = static_cast<int>(230 - 200 * t);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_map_svg(const std::filesystem::path& map_csv, const std::string& title) {
  const auto rows = geometry::read_map_csv(map_csv);
  std::vector<const geometry::MapRow*> valid;
  for (const auto& r : rows) {
    if (r.direction) valid.push_back(&r);
  }
  if (valid.empty()) throw std::runtime_error("no valid windows in " + map_csv.string());

  double t0 = valid.front()->time_s, t1 = t0;
  for (const auto* r : valid) {
    t0 = std::min(t0, r->time_s);
    t1 = std::max(t1, r->time_s);
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto x_of = [&](double az) { return kLeft + pw * az / 360.0; };
  const auto y_of = [&](double el) { return kTop + ph * (1.0 - el / 90.0); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" + escape(title) +
         "</text>\n";
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int az = 0; az <= 360; az += 45) {
    svg += "<text x=\"" + num(x_of(az)) + "\" y=\"" + num(kTop + ph + 16) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + std::to_string(az) + "</text>\n";
  }
  for (int el = 0; el <= 90; el += 15) {
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y_of(el) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
           std::to_string(el) + "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\" font-size=\"12\">Azimuth (deg)</text>\n";
  svg += "<text x=\"14\" y=\"" + num(kTop + ph / 2) + "\" font-size=\"12\" transform=\"rotate(-90 14 " +
         num(kTop + ph / 2) + ")\" text-anchor=\"middle\">Elevation (deg)</text>\n";
  for (const auto* r : valid) {
    const double t = t1 > t0 ? (r->time_s - t0) / (t1 - t0) : 0.0;
    svg += "<circle cx=\"" + num(x_of(r->direction->azimuth_deg)) + "\" cy=\"" + num(y_of(r->direction->elevation_deg)) +
           "\" r=\"2\" fill=\"" + colour(t) + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace itfmap::cli
