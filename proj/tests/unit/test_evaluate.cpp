#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "itfmap/evaluate.hpp"
#include "itfmap/mapping.hpp"
#include "scratch_dir.hpp"

using namespace itfmap;
using namespace itfmap::evaluate;
using geometry::Direction;

namespace {

simulate::AngleTrack track_of(std::vector<Direction> points) {
  simulate::AngleTrack t;
  t.points = std::move(points);
  return t;
}

Dataset small_dataset(std::uint64_t seed, std::size_t windows = 24, double snr_db = simulate::kNoNoise) {
  simulate::TrackParams p;
  p.elevation_start_deg = 40.0;
  p.step_sigma_deg = 1.0;
  const auto track = simulate::make_track(simulate::TrackKind::random_walk, windows, p, seed, 256, 32);
  const auto ref = simulate::band_limited_noise(track.record_length(), 4e-9, 40e6, 80e6, seed + 1);
  auto sim = simulate::synthesize_record(ref, track, {}, 4e-9);
  simulate::add_channel_noise(sim.record, snr_db, seed + 2);
  return {"ds" + std::to_string(seed), sim.record, sim.truth};
}

BenchmarkGrid single_cell(const char* filter, xcorr::Method m, xcorr::InterpMethod i, int f) {
  BenchmarkGrid g;
  g.filters = {denoise::parse_filter(filter)};
  g.methods = {m};
  g.interp_methods = {i};
  g.factors = {f};
  return g;
}

}  // namespace

TEST(MapError, IdenticalTracksScoreZero) {
  const auto t = track_of({{10, 20}, {30, 40}, {350, 5}});
  const auto e = map_error(t, t);
  EXPECT_EQ(e.mean_deg, 0.0);
  EXPECT_EQ(e.included, 3u);
  EXPECT_EQ(e.excluded, 0u);
}

TEST(MapError, SingleThreeFourOffsetAmongFive) {
  const auto truth = track_of({{10, 10}, {20, 20}, {30, 30}, {40, 40}, {50, 50}});
  auto est = truth;
  est.points[2] = {33, 34};
  EXPECT_EQ(map_error(est, truth).mean_deg, 1.0);
  EXPECT_EQ(window_distance({33, 34}, {30, 30}), 5.0);
}

TEST(MapError, AzimuthSeamWraps) {
  EXPECT_DOUBLE_EQ(window_distance({359, 45}, {1, 45}), 2.0);
  EXPECT_DOUBLE_EQ(window_distance({1, 45}, {359, 45}), 2.0);
  EXPECT_DOUBLE_EQ(map_error(track_of({{359, 10}}), track_of({{1, 10}})).mean_deg, 2.0);
}

TEST(MapError, SymmetricAndTriangle) {
  const Direction a{12, 30}, b{300, 60}, c{190, 5};
  EXPECT_DOUBLE_EQ(window_distance(a, b), window_distance(b, a));
  EXPECT_LE(window_distance(a, c), window_distance(a, b) + window_distance(b, c) + 1e-12);
  EXPECT_DOUBLE_EQ(window_distance({a.azimuth_deg + 360.0, a.elevation_deg}, b), window_distance(a, b));
}

TEST(MapError, InvalidWindowsAreExcludedAndCounted) {
  const auto truth = track_of({{10, 10}, {20, 20}, {30, 30}});
  std::vector<geometry::DirectionEstimate> est(3);
  for (std::size_t i = 0; i < 3; ++i) {
    est[i].window_index = i;
    est[i].direction = truth.points[i];
  }
  est[1].direction.reset();
  est[2].direction = Direction{30, 36};
  const auto e = map_error(est, truth);
  EXPECT_EQ(e.included, 2u);
  EXPECT_EQ(e.excluded, 1u);
  EXPECT_DOUBLE_EQ(e.mean_deg, 3.0);
  for (auto& x : est) x.direction.reset();
  EXPECT_THROW(map_error(est, truth), std::invalid_argument);
}

TEST(Grid, TableShapeAndValidation) {
  const auto g = full_grid();
  EXPECT_EQ(g.filters.size(), 10u);
  EXPECT_EQ(g.cell_count(), 240u);
  EXPECT_EQ(denoise::filter_name(g.filters.front()), "wt-coif5-sure");
  EXPECT_EQ(denoise::filter_name(g.filters.back()), "kf");
  auto bad = g;
  bad.factors = {3};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = g;
  bad.methods.clear();
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Benchmark, SingleCellEqualsOnePipelineRun) {
  const std::vector<Dataset> ds{small_dataset(1)};
  const auto report = run_benchmark(single_cell("none", xcorr::Method::cctd, xcorr::InterpMethod::cubic, 8), ds, {});
  ASSERT_EQ(report.cells.size(), 1u);

  mapping::MappingConfig cfg;
  cfg.plan = {256, 32};
  const auto run = mapping::map_record(ds[0].record, cfg);
  const auto direct = map_error(run.directions(), ds[0].truth);
  EXPECT_DOUBLE_EQ(report.cells[0].mean_dist_deg, direct.mean_deg);
  EXPECT_EQ(report.cells[0].excluded_windows, direct.excluded);
  EXPECT_EQ(report.cells[0].total_windows, ds[0].truth.size());
  EXPECT_LT(direct.mean_deg, 2.0);
}

TEST(Benchmark, AveragesPerRecordThenAcrossRecords) {
  const std::vector<Dataset> ds{small_dataset(1, 24, 10.0), small_dataset(7, 12, 10.0)};
  BenchmarkGrid g = single_cell("bpf", xcorr::Method::ccfd, xcorr::InterpMethod::linear, 1);
  g.filters.push_back(denoise::parse_filter("kf"));
  g.methods.push_back(xcorr::Method::ccwd);
  const auto report = run_benchmark(g, ds, {});
  ASSERT_EQ(report.cells.size(), 4u);
  for (const auto& c : report.cells) {
    ASSERT_EQ(c.per_record_deg.size(), 2u);
    EXPECT_DOUBLE_EQ(c.mean_dist_deg, (c.per_record_deg[0] + c.per_record_deg[1]) / 2.0);
    EXPECT_EQ(c.total_windows, 36u);
    EXPECT_LE(c.excluded_windows, c.total_windows);
    EXPECT_GE(c.mean_dist_deg, 0.0);
  }
  EXPECT_EQ(report.cells[0].filter, "bpf");
  EXPECT_EQ(report.cells[1].method, xcorr::Method::ccwd);
  EXPECT_EQ(report.cells[2].filter, "kf");
}

TEST(Benchmark, ThreadCountDoesNotChangeResults) {
  const std::vector<Dataset> ds{small_dataset(3, 16, 20.0)};
  auto g = single_cell("wt-sym4-sure", xcorr::Method::cctd, xcorr::InterpMethod::cubic, 1);
  g.factors = {1, 2, 4, 8};
  BenchOptions one;
  one.threads = 1;
  BenchOptions many;
  many.threads = 4;
  const auto a = render_report(run_benchmark(g, ds, one), ReportFormat::csv);
  const auto b = render_report(run_benchmark(g, ds, many), ReportFormat::csv);
  EXPECT_EQ(a, b);
}

TEST(Benchmark, RejectsMismatchedTruth) {
  auto d = small_dataset(4, 10);
  d.truth.points.pop_back();
  const std::vector<Dataset> ds{d};
  EXPECT_THROW(run_benchmark(single_cell("none", xcorr::Method::cctd, xcorr::InterpMethod::linear, 1), ds, {}),
               std::invalid_argument);
  auto e = small_dataset(4, 10);
  e.truth.points.clear();
  const std::vector<Dataset> empty_truth{e};
  EXPECT_THROW(run_benchmark(single_cell("none", xcorr::Method::cctd, xcorr::InterpMethod::linear, 1), empty_truth, {}),
               std::invalid_argument);
}

TEST(Report, CsvRoundTripsAndMarkdownHasOneRowPerFilter) {
  ErrorReport r;
  r.cells.push_back({"bpf", xcorr::Method::cctd, xcorr::InterpMethod::linear, 1, 3.1234567, 2, 1, 40, {}});
  r.cells.push_back({"kf", xcorr::Method::cctd, xcorr::InterpMethod::linear, 1, std::nan(""), 0, 40, 40, {}});
  const auto dir = test_support::scratch_dir("evaluate_report");
  emit_report(r, dir / "r.csv", ReportFormat::csv, {"seed=1"});
  const auto rows = read_report_csv(dir / "r.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].filter, "bpf");
  EXPECT_EQ(rows[0].method, "cctd");
  EXPECT_EQ(rows[0].interp, "linear");
  EXPECT_DOUBLE_EQ(rows[0].mean_dist_deg, 3.123457);
  EXPECT_EQ(rows[0].excluded_windows, 1u);
  EXPECT_TRUE(std::isnan(rows[1].mean_dist_deg));

  const auto md = render_report(r, ReportFormat::markdown);
  std::istringstream in(md);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "| Filter | CCTD linear x1 |");
  EXPECT_EQ(lines[2], "| bpf | 3.12 |");
  EXPECT_EQ(lines[3], "| kf | n/a |");
  EXPECT_THROW(render_report(ErrorReport{}, ReportFormat::csv), std::invalid_argument);
  EXPECT_EQ(parse_report_format("md"), ReportFormat::markdown);
  EXPECT_THROW(parse_report_format("xlsx"), std::invalid_argument);
}
