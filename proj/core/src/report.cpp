#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "itfmap/evaluate.hpp"
#include "text_util.hpp"

namespace itfmap::evaluate {
namespace {

std::string fixed6(double v) { return std::isnan(v) ? "nan" : detail::format_fixed(v, 6); }

std::string render_csv(const ErrorReport& report, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "filter,method,interp,factor,mean_dist_deg,records,excluded_windows\n";
  for (const auto& c : report.cells) {
    out += c.filter + "," + xcorr::method_name(c.method) + "," + xcorr::interp_method_name(c.interp) + "," +
           std::to_string(c.factor) + "," + fixed6(c.mean_dist_deg) + "," + std::to_string(c.records) + "," +
           std::to_string(c.excluded_windows) + "\n";
  }
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string render_markdown(const ErrorReport& report, const std::vector<std::string>& comments) {
  // Columns in first-seen order of (method, interp, factor); rows in
  // first-seen filter order.
  std::vector<std::string> rows, cols;
  std::map<std::pair<std::string, std::string>, double> value;
  for (const auto& c : report.cells) {
    const std::string col = upper(xcorr::method_name(c.method)) + " " + xcorr::interp_method_name(c.interp) + " x" +
                            std::to_string(c.factor);
    if (std::find(rows.begin(), rows.end(), c.filter) == rows.end()) rows.push_back(c.filter);
    if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
    value[{c.filter, col}] = c.mean_dist_deg;
  }
  std::string out;
  for (const auto& c : comments) out += "<!-- " + c + " -->\n";
  if (!comments.empty()) out += "\n";
  out += "| Filter |";
  for (const auto& col : cols) out += " " + col + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& r : rows) {
    out += "| " + r + " |";
    for (const auto& col : cols) {
      const auto it = value.find({r, col});
      out += " " + (it == value.end() ? std::string("-") : (std::isnan(it->second) ? "n/a" : detail::format_fixed(it->second, 2))) + " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  throw std::invalid_argument("unknown report format '" + std::string(text) + "' (csv, markdown)");
}

std::string render_report(const ErrorReport& report, ReportFormat format, const std::vector<std::string>& comments) {
  if (report.cells.empty()) throw std::invalid_argument("report is empty");
  return format == ReportFormat::csv ? render_csv(report, comments) : render_markdown(report, comments);
}

void emit_report(const ErrorReport& report, const std::filesystem::path& path, ReportFormat format,
                 const std::vector<std::string>& comments) {
  const auto text = render_report(report, format, comments);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write report: " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open report: " + path.string());
  std::vector<ReportRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(f, line)) {
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body.rfind("filter,", 0) != 0) throw std::runtime_error("report lacks the column header");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(body, ',');
    if (fields.size() != 7) throw std::runtime_error("report row needs 7 fields: " + std::string(body));
    ReportRow row;
    row.filter = std::string(fields[0]);
    row.method = std::string(fields[1]);
    row.interp = std::string(fields[2]);
    const auto factor = detail::parse_double(fields[3]);
    const auto records = detail::parse_double(fields[5]);
    const auto excluded = detail::parse_double(fields[6]);
    if (!factor || !records || !excluded) throw std::runtime_error("report row has a bad number: " + std::string(body));
    row.factor = static_cast<int>(*factor);
    row.records = static_cast<std::size_t>(*records);
    row.excluded_windows = static_cast<std::size_t>(*excluded);
    if (detail::trim(fields[4]) == "nan") {
      row.mean_dist_deg = std::nan("");
    } else {
      const auto d = detail::parse_double(fields[4]);
      if (!d) throw std::runtime_error("report row has a bad distance: " + std::string(body));
      row.mean_dist_deg = *d;
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::runtime_error("report lacks the column header");
  return rows;
}

}  // namespace itfmap::evaluate
