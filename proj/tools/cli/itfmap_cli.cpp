#include "itfmap_cli.hpp"

#include <charconv>
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <cstdio>
#include <stdexcept>

#include "itfmap/denoise.hpp"
#include "itfmap/evaluate.hpp"
#include "itfmap/geometry.hpp"
#include "itfmap/mapping.hpp"
#include "itfmap/signals.hpp"
#include "itfmap/simulate.hpp"
#include "itfmap/xcorr.hpp"

namespace itfmap::cli {
namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs `fn`, reporting std::invalid_argument as a configuration error.
template <class Fn>
auto checked(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

template <class Fn>
void writing(const fs::path& path, Fn&& fn) {
  const auto dir = path.parent_path();
  if (!dir.empty() && !fs::is_directory(dir)) throw OutputError("output directory does not exist: " + dir.string());
  try {
    fn();
  } catch (const std::runtime_error& e) {
    throw OutputError(e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "none") return simulate::kNoNoise;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || std::isnan(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid --snr-db '" + text + "' (a number in dB or 'inf')");
  }
}

geometry::ArrayGeometry geometry_of(const RunConfig& cfg) {
  geometry::ArrayGeometry g{cfg.baseline_m, cfg.speed_mps};
  checked([&] { g.validate(); });
  return g;
}

double dt_of(const RunConfig& cfg) {
  if (!(cfg.dt_ns > 0.0) || !std::isfinite(cfg.dt_ns)) throw ConfigError("--dt-ns must be positive");
  return cfg.dt_ns / 1e9;
}

SegmentationPlan plan_of(const RunConfig& cfg) {
  if (cfg.window < 2) throw ConfigError("--window must be at least 2 samples");
  if (cfg.hop < 1) throw ConfigError("--hop must be at least 1");
  return {cfg.window, cfg.hop};
}

xcorr::CorrelationOptions correlation_of(const RunConfig& cfg) {
  xcorr::CorrelationOptions opt;
  opt.method = checked([&] { return xcorr::parse_method(cfg.cc); });
  opt.wavelet = cfg.wavelet;
  checked([&] { return WaveletBasis::from_name(cfg.wavelet); });
  return opt;
}

std::vector<std::string> provenance(const RunConfig& cfg, const std::string& command) {
  return {"itfmap " + command,
          "filter=" + cfg.filter,
          "cc=" + cfg.cc,
          "interp=" + cfg.interp,
          "window=" + std::to_string(cfg.window),
          "hop=" + std::to_string(cfg.hop),
          "baseline_m=" + fmt(cfg.baseline_m),
          "speed_mps=" + fmt(cfg.speed_mps),
          "wavelet=" + cfg.wavelet};
}

const std::string& single_input(const RunConfig& cfg, const char* command) {
  if (cfg.inputs.size() != 1) throw ConfigError(std::string(command) + " takes exactly one --input");
  if (!fs::exists(cfg.inputs.front())) throw InputError("input not found: " + cfg.inputs.front());
  return cfg.inputs.front();
}

void require_output(const RunConfig& cfg) {
  if (cfg.output.empty()) throw ConfigError("--output is required");
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_output(cfg);
  const auto geom = geometry_of(cfg);
  const double dt = dt_of(cfg);
  const auto plan = plan_of(cfg);
  const double snr = parse_snr(cfg.snr_db);
  if (cfg.records < 1) throw ConfigError("--records must be at least 1");
  if (cfg.samples < cfg.window) {
    throw ConfigError("--samples (" + std::to_string(cfg.samples) + ") is shorter than --window (" +
                      std::to_string(cfg.window) + ")");
  }
  const auto kind = checked([&] { return simulate::parse_track_kind(cfg.track); });
  if (cfg.reference != "bursts" && cfg.reference != "noise") throw ConfigError("--reference must be 'bursts' or 'noise'");
  simulate::TrackParams params;
  params.azimuth_start_deg = cfg.az_deg;
  params.elevation_start_deg = cfg.el_deg;
  params.azimuth_end_deg = cfg.az_end_deg;
  params.elevation_end_deg = cfg.el_end_deg;
  params.step_sigma_deg = cfg.step_deg;
  params.elevation_min_deg = cfg.el_min_deg;
  params.elevation_max_deg = cfg.el_max_deg;
  simulate::AugmentSpec aug;
  aug.noise_sigma_deg = cfg.augment_sigma_deg;
  aug.noise_on_azimuth = cfg.augment_azimuth;
  aug.scale_factor = cfg.augment_scale;
  aug.flip = cfg.flip;
  if (!(aug.scale_factor > 0.0)) throw ConfigError("--augment-scale must be > 0");
  if (!(aug.noise_sigma_deg >= 0.0)) throw ConfigError("--augment-sigma must be >= 0");

  const std::size_t windows = plan.count(cfg.samples);
  const fs::path base(cfg.output);
  const auto format = format_from_path(base);
  for (std::size_t r = 0; r < cfg.records; ++r) {
    const std::uint64_t seed = cfg.records == 1 ? cfg.seed : simulate::derive_seed(cfg.seed, 1000 + r);
    auto track = checked([&] {
      return simulate::make_track(kind, windows, params, simulate::derive_seed(seed, 1), plan.window_length, plan.hop);
    });
    aug.seed = simulate::derive_seed(seed, 2);
    track = simulate::augment_track(track, aug);
    const auto reference =
        cfg.reference == "noise"
            ? simulate::band_limited_noise(track.record_length(), dt, 40e6, 80e6, simulate::derive_seed(seed, 0))
            : simulate::burst_reference(track.record_length(), dt, {}, simulate::derive_seed(seed, 0));
    auto sim = simulate::synthesize_record(reference, track, geom, dt);
    simulate::add_channel_noise(sim.record, snr, simulate::derive_seed(seed, 3));
    sim.record.label = "simulated seed " + std::to_string(seed);

    fs::path path = base;
    if (cfg.records > 1) {
      path = base.parent_path() / (base.stem().string() + "_" + std::to_string(r) + base.extension().string());
    }
    auto comments = provenance(cfg, "simulate");
    comments.push_back("seed=" + std::to_string(seed));
    comments.push_back("snr_db=" + cfg.snr_db);
    comments.push_back("track=" + cfg.track);
    comments.push_back("reference=" + cfg.reference);
    writing(path, [&] { save_record(sim.record, path, format, comments); });
    const auto truth = simulate::truth_path_for(path);
    writing(truth, [&] { simulate::write_truth_csv(truth, sim); });
    out << "wrote " << path.string() << " (" << sim.record.length() << " samples, " << track.size()
        << " windows) and " << truth.string() << "\n";
  }
  return kOk;
}

int cmd_map(const RunConfig& cfg, std::ostream& out) {
  require_output(cfg);
  mapping::MappingConfig mc;
  mc.plan = plan_of(cfg);
  mc.filter = checked([&] { return denoise::parse_filter(cfg.filter); });
  mc.correlation = correlation_of(cfg);
  mc.interp = checked([&] { return xcorr::parse_interp(cfg.interp); });
  mc.geometry = geometry_of(cfg);
  mc.threads = cfg.threads;
  const auto& input = single_input(cfg, "map");

  const auto record = load_record(input);
  const auto result = mapping::map_record(record, mc);

  auto comments = provenance(cfg, "map");
  comments.insert(comments.begin() + 1, "input=" + input);
  comments.push_back("dt_s=" + fmt(record.sample_interval));
  const fs::path path(cfg.output);
  writing(path, [&] { geometry::write_map_csv(path, result.directions(), result.times(), comments); });
  out << "wrote " << path.string() << " (" << result.windows.size() << " windows, " << result.invalid_windows
      << " invalid)\n";

  if (!cfg.elevation_series.empty()) {
    const fs::path series(cfg.elevation_series);
    writing(series, [&] {
      std::ofstream f(series, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write " + series.string());
      for (const auto& c : comments) f << "# " << c << "\n";
      f << "time_s,elevation_deg\n";
      char buf[64];
      for (const auto& w : result.windows) {
        if (!w.direction.valid()) continue;
        std::snprintf(buf, sizeof buf, "%.9g,%.6f\n", w.time_s, w.direction.direction->elevation_deg);
        f << buf;
      }
      if (!f) throw std::runtime_error("write failed: " + series.string());
    });
    out << "wrote " << series.string() << "\n";
  }
  return kOk;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (!fs::exists(p)) throw InputError("input not found: " + in);
    if (!fs::is_directory(p)) {
      out.push_back(p);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& e : fs::directory_iterator(p)) {
      const auto name = e.path().filename().string();
      if (!e.is_regular_file() || name.ends_with(".truth.csv")) continue;
      if (e.path().extension() == ".csv" || e.path().extension() == ".bin") found.push_back(e.path());
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  if (out.empty()) throw InputError("no record files among the inputs");
  return out;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  require_output(cfg);
  if (cfg.inputs.empty()) throw ConfigError("bench needs at least one --input");
  evaluate::BenchmarkGrid grid;
  if (cfg.grid == "full") {
    grid = evaluate::full_grid();
  } else if (cfg.grid == "single") {
    grid.filters = {checked([&] { return denoise::parse_filter(cfg.filter); })};
    grid.methods = {checked([&] { return xcorr::parse_method(cfg.cc); })};
    auto interp = checked([&] { return xcorr::parse_interp(cfg.interp); });
    if (interp.method == xcorr::InterpMethod::none) interp = {xcorr::InterpMethod::linear, 1};
    grid.interp_methods = {interp.method};
    grid.factors = {interp.factor};
  } else {
    throw ConfigError("--grid must be 'single' or 'full'");
  }
  evaluate::BenchOptions opt;
  opt.geometry = geometry_of(cfg);
  opt.wavelet = correlation_of(cfg).wavelet;
  opt.threads = cfg.threads;
  const fs::path path(cfg.output);
  evaluate::ReportFormat format = evaluate::ReportFormat::csv;
  if (!cfg.format.empty()) {
    format = checked([&] { return evaluate::parse_report_format(cfg.format); });
  } else if (path.extension() == ".md") {
    format = evaluate::ReportFormat::markdown;
  }

  std::vector<evaluate::Dataset> datasets;
  for (const auto& p : expand_inputs(cfg.inputs)) {
    const auto truth_path = simulate::truth_path_for(p);
    if (!fs::exists(truth_path)) throw InputError("dataset without ground truth: " + p.string());
    evaluate::Dataset ds;
    ds.name = p.filename().string();
    ds.record = load_record(p);
    ds.truth = simulate::read_truth_csv(truth_path).track;
    datasets.push_back(std::move(ds));
  }
  const auto report = evaluate::run_benchmark(grid, datasets, opt);

  auto comments = provenance(cfg, "bench");
  comments.push_back("grid=" + cfg.grid);
  comments.push_back("records=" + std::to_string(datasets.size()));
  writing(path, [&] { evaluate::emit_report(report, path, format, comments); });
  out << "wrote " << path.string() << " (" << report.cells.size() << " cells over " << datasets.size()
      << " records)\n";
  return kOk;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
  require_output(cfg);
  const auto& input = single_input(cfg, "plot");
  const auto svg = render_map_svg(input, fs::path(input).filename().string());
  const fs::path path(cfg.output);
  writing(path, [&] {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << svg;
    if (!f) throw std::runtime_error("write failed: " + path.string());
  });
  out << "wrote " << path.string() << "\n";
  return kOk;
}

void add_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("-i,--input", cfg.inputs, "Input record(s), directory or map CSV");
  app.add_option("-o,--output", cfg.output, "Output file");
  app.add_option("--filter", cfg.filter, "none | bpf[:lo-hi] | kf[:q,r] | wt-<basis>-<sure|universal>");
  app.add_option("--cc", cfg.cc, "Correlation method: cctd | ccfd | ccwd");
  app.add_option("--interp", cfg.interp, "Peak interpolation: none | linear:<f> | cubic:<f>, f in 1,2,4,8");
  app.add_option("--window", cfg.window, "Window length in samples");
  app.add_option("--hop", cfg.hop, "Window hop in samples");
  app.add_option("--baseline-m", cfg.baseline_m, "Baseline length in metres");
  app.add_option("--dt-ns", cfg.dt_ns, "Sample interval in nanoseconds (simulate)");
  app.add_option("--speed", cfg.speed_mps, "Propagation speed in m/s");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--snr-db", cfg.snr_db, "Channel SNR in dB, or inf");
  app.add_option("--wavelet", cfg.wavelet, "Wavelet basis for ccwd");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  app.add_option("--samples", cfg.samples, "Simulated record length");
  app.add_option("--track", cfg.track, "constant | linear-sweep | random-walk");
  app.add_option("--reference", cfg.reference, "Simulated antenna B waveform: bursts | noise");
  app.add_option("--az", cfg.az_deg, "Track start azimuth (deg)");
  app.add_option("--el", cfg.el_deg, "Track start elevation (deg)");
  app.add_option("--az-end", cfg.az_end_deg, "Sweep end azimuth (deg)");
  app.add_option("--el-end", cfg.el_end_deg, "Sweep end elevation (deg)");
  app.add_option("--step-deg", cfg.step_deg, "Random-walk step sigma (deg)");
  app.add_option("--el-min", cfg.el_min_deg, "Track elevation lower bound (deg)");
  app.add_option("--el-max", cfg.el_max_deg, "Track elevation upper bound (deg)");
  app.add_option("--augment-sigma", cfg.augment_sigma_deg, "Elevation noise sigma (deg)");
  app.add_option("--augment-scale", cfg.augment_scale, "Outward scale about the centroid");
  app.add_flag("--augment-azimuth", cfg.augment_azimuth, "Apply the noise to azimuth too");
  app.add_flag("--flip", cfg.flip, "Rotate the track by 180 deg in azimuth");
  app.add_option("--records", cfg.records, "Number of records to simulate");
  app.add_option("--elevation-series", cfg.elevation_series, "Also write time vs elevation CSV (map)");
  app.add_option("--grid", cfg.grid, "single | full (bench)");
  app.add_option("--format", cfg.format, "csv | markdown (bench)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-dimensional VHF source mapping for a crossed-baseline interferometer", "itfmap"};
  RunConfig cfg;
  app.set_config("--config", "", "Flat `key = value` configuration file");
  add_options(app, cfg);
  app.require_subcommand(1, 1);
  auto* simulate_cmd = app.add_subcommand("simulate", "Synthesize a record and its ground-truth sidecar");
  auto* map_cmd = app.add_subcommand("map", "Map one record to azimuth/elevation estimates");
  auto* bench_cmd = app.add_subcommand("bench", "Score a filter/correlation/interpolation grid");
  auto* plot_cmd = app.add_subcommand("plot", "Render a map CSV as an SVG scatter");
  for (auto* sub : {simulate_cmd, map_cmd, bench_cmd, plot_cmd}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::FileError& e) {
    err << "itfmap: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const CLI::ConfigError& e) {
    err << "itfmap: invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const CLI::ParseError& e) {
    err << "itfmap: " << e.what() << "\n" << "run 'itfmap --help' for usage\n";
    return kUsage;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
    if (map_cmd->parsed()) return cmd_map(cfg, out);
    if (bench_cmd->parsed()) return cmd_bench(cfg, out);
    return cmd_plot(cfg, out);
  } catch (const ConfigError& e) {
    err << "itfmap: invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const InputError& e) {
    err << "itfmap: " << e.what() << "\n";
    return kMissingInput;
  } catch (const OutputError& e) {
    err << "itfmap: " << e.what() << "\n";
    return kWriteFailure;
  } catch (const std::exception& e) {
    err << "itfmap: " << e.what() << "\n";
    return kProcessing;
  }
}

}  // namespace itfmap::cli
