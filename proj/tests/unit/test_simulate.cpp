#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <fstream>
#include <numbers>

#include "itfmap/simulate.hpp"
#include "itfmap/xcorr.hpp"
#include "oracles.hpp"
#include "scratch_dir.hpp"

using namespace itfmap;
using namespace itfmap::simulate;

namespace {

constexpr double kDt = 4e-9;

double energy(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST(Track, ConstantAndLinearSweep) {
  TrackParams p;
  p.azimuth_start_deg = 120.0;
  p.elevation_start_deg = 45.0;
  const auto c = make_track(TrackKind::constant, 10, p, 1);
  ASSERT_EQ(c.size(), 10u);
  for (const auto& d : c.points) {
    EXPECT_EQ(d.azimuth_deg, 120.0);
    EXPECT_EQ(d.elevation_deg, 45.0);
  }
  p.elevation_start_deg = 60.0;
  p.elevation_end_deg = 30.0;
  const auto s = make_track(TrackKind::linear_sweep, 4, p, 1);
  ASSERT_EQ(s.size(), 4u);
  const double want[] = {60.0, 50.0, 40.0, 30.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.points[i].elevation_deg, want[i], 1e-12);
  EXPECT_THROW(make_track(TrackKind::constant, 0, p, 1), std::invalid_argument);
  EXPECT_EQ(parse_track_kind("linear-sweep"), TrackKind::linear_sweep);
  EXPECT_EQ(parse_track_kind("random-walk"), TrackKind::random_walk);
  EXPECT_THROW(parse_track_kind("spiral"), std::invalid_argument);
}

TEST(Track, RandomWalkIsSeededAndClipped) {
  TrackParams p;
  p.step_sigma_deg = 5.0;
  p.elevation_start_deg = 85.0;
  const auto a = make_track(TrackKind::random_walk, 500, p, 42);
  const auto b = make_track(TrackKind::random_walk, 500, p, 42);
  const auto c = make_track(TrackKind::random_walk, 500, p, 43);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.points[i].azimuth_deg, b.points[i].azimuth_deg);
    EXPECT_EQ(a.points[i].elevation_deg, b.points[i].elevation_deg);
    EXPECT_GE(a.points[i].elevation_deg, 0.0);
    EXPECT_LE(a.points[i].elevation_deg, 90.0);
    EXPECT_GE(a.points[i].azimuth_deg, 0.0);
    EXPECT_LT(a.points[i].azimuth_deg, 360.0);
    differs = differs || a.points[i].elevation_deg != c.points[i].elevation_deg;
  }
  EXPECT_TRUE(differs);
}

TEST(Track, RecordLengthHoldsExactlyNWindows) {
  const auto t = make_track(TrackKind::constant, 37, {}, 0, 256, 8);
  EXPECT_EQ(t.record_length(), 36u * 8u + 256u);
  EXPECT_EQ((SegmentationPlan{256, 8}.count(t.record_length())), 37u);
}

TEST(Augment, IdentityFlipAndDeterminism) {
  TrackParams p;
  p.step_sigma_deg = 2.0;
  const auto t = make_track(TrackKind::random_walk, 100, p, 7);
  const auto id = augment_track(t, {0.0, false, 1.0, false, 3});
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(id.points[i].azimuth_deg, t.points[i].azimuth_deg, 1e-9);
    EXPECT_NEAR(id.points[i].elevation_deg, t.points[i].elevation_deg, 1e-9);
  }

  TrackParams q;
  q.azimuth_start_deg = 30.0;
  const auto flipped = augment_track(make_track(TrackKind::constant, 3, q, 0), {0.0, false, 1.0, true, 0});
  for (const auto& d : flipped.points) {
    EXPECT_NEAR(d.azimuth_deg, 210.0, 1e-12);
    EXPECT_NEAR(d.elevation_deg, 45.0, 1e-12);
  }

  const AugmentSpec noisy{1.0, true, 1.2, true, 11};
  const auto a = augment_track(t, noisy);
  const auto b = augment_track(t, noisy);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(a.points[i].azimuth_deg, b.points[i].azimuth_deg);
    EXPECT_EQ(a.points[i].elevation_deg, b.points[i].elevation_deg);
    EXPECT_GE(a.points[i].elevation_deg, 0.0);
    EXPECT_LE(a.points[i].elevation_deg, 90.0);
  }
}

TEST(Augment, ScalingExpandsAboutTheCentroid) {
  TrackParams p;
  p.azimuth_start_deg = 100.0;
  p.azimuth_end_deg = 120.0;
  p.elevation_start_deg = 40.0;
  p.elevation_end_deg = 50.0;
  const auto t = make_track(TrackKind::linear_sweep, 3, p, 0);
  const auto s = augment_track(t, {0.0, false, 2.0, false, 0});
  EXPECT_NEAR(s.points[0].azimuth_deg, 90.0, 1e-9);
  EXPECT_NEAR(s.points[2].azimuth_deg, 130.0, 1e-9);
  EXPECT_NEAR(s.points[0].elevation_deg, 35.0, 1e-9);
  EXPECT_NEAR(s.points[1].elevation_deg, 45.0, 1e-9);
  EXPECT_NEAR(s.points[2].elevation_deg, 55.0, 1e-9);
}

TEST(FractionalDelay, IntegerShiftIsCircularAndEnergyIsKept) {
  const auto x = band_limited_noise(512, kDt, 40e6, 80e6, 3);
  const auto y = fractional_delay(x, 5.0);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[(i + 5) % x.size()], x[i], 1e-12);
  const auto f = fractional_delay(x, 2.37);
  EXPECT_NEAR(energy(f) / energy(x), 1.0, 1e-12);
  const auto back = fractional_delay(f, -2.37);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-10);
}

TEST(FractionalDelay, MatchesAnalyticToneDelay) {
  // Tones on the FFT grid are periodic, so circular delay is exact.
  const auto tones = oracle::random_tones(6, 0.1, 0.4, 12, 512);
  const auto x = tones.sample(512);
  const auto want = tones.sample(512, 3.3);
  const auto got = fractional_delay(x, 3.3);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9);
}

TEST(Reference, NoiseIsUnitRmsAndInBand) {
  const auto x = band_limited_noise(4096, kDt, 40e6, 80e6, 9);
  EXPECT_NEAR(energy(x) / 4096.0, 1.0, 1e-12);
  EXPECT_EQ(x, band_limited_noise(4096, kDt, 40e6, 80e6, 9));
  const auto b = burst_reference(8192, kDt, {}, 9);
  EXPECT_NEAR(energy(b) / 8192.0, 1.0, 1e-12);
  EXPECT_EQ(b, burst_reference(8192, kDt, {}, 9));
  // An on-grid probe near 10 MHz (bin 160) is out of band.
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * std::sin(2.0 * std::numbers::pi * 160.0 * static_cast<double>(i) / 4096.0);
  EXPECT_LT(std::abs(dot) / std::sqrt(energy(x) * 2048.0), 1e-9);
}

TEST(Synthesize, ZenithTrackCopiesTheReference) {
  TrackParams p;
  p.elevation_start_deg = 90.0;
  const auto t = make_track(TrackKind::constant, 20, p, 0, 256, 16);
  const auto ref = band_limited_noise(t.record_length(), kDt, 40e6, 80e6, 1);
  const auto sim = synthesize_record(ref, t, {}, kDt);
  EXPECT_EQ(sim.record.length(), t.record_length());
  EXPECT_EQ(sim.record.channels[1], sim.record.channels[0]);
  EXPECT_EQ(sim.record.channels[2], sim.record.channels[0]);
}

// 50 ns at 4 ns is 12.5 samples: the integer peak sits on either side.
TEST(Synthesize, HorizonOnTheBdAxisGivesTwelveAndAHalfSamples) {
  TrackParams p;
  p.azimuth_start_deg = 0.0;
  p.elevation_start_deg = 0.0;
  const auto t = make_track(TrackKind::constant, 5, p, 0, 256, 64);
  const auto ref = band_limited_noise(t.record_length(), kDt, 40e6, 80e6, 2);
  const auto sim = synthesize_record(ref, t, {15.0, 3e8}, kDt);
  for (const auto& w : segment(sim.record, {256, 64})) {
    const std::vector<double> b(w.segments[0].begin(), w.segments[0].end());
    const std::vector<double> d(w.segments[2].begin(), w.segments[2].end());
    const auto c = oracle::xcorr(b, d);
    const auto peak = std::max_element(c.begin(), c.end()) - c.begin() - 255;
    EXPECT_TRUE(peak == 12 || peak == 13) << w.index << " peak " << peak;
    const auto series = xcorr::cc_time(b, d);
    EXPECT_NEAR(xcorr::refine_peak(series, {xcorr::InterpMethod::cubic, 8}), 12.5, 0.13) << w.index;
  }
  for (const auto& tau : sim.tdoa) {
    EXPECT_NEAR(tau.tau2_s, 50e-9, 1e-20);
    EXPECT_NEAR(tau.tau1_s, 0.0, 1e-24);
  }
}

TEST(Synthesize, DelaysStayInsideTransitAndKeepEnergy) {
  TrackParams p;
  p.step_sigma_deg = 3.0;
  const auto t = make_track(TrackKind::random_walk, 64, p, 5, 256, 32);
  const auto ref = band_limited_noise(t.record_length(), kDt, 40e6, 80e6, 5);
  const geometry::ArrayGeometry g;
  const auto sim = synthesize_record(ref, t, g, kDt);
  ASSERT_EQ(sim.tdoa.size(), t.size());
  for (const auto& tau : sim.tdoa) EXPECT_LE(std::hypot(tau.tau1_s, tau.tau2_s), g.transit_time() * (1 + 1e-12));
  const double eb = energy(sim.record.channels[0]);
  EXPECT_NEAR(energy(sim.record.channels[1]) / eb, 1.0, 0.01);
  EXPECT_NEAR(energy(sim.record.channels[2]) / eb, 1.0, 0.01);
  std::vector<double> shorter(ref.begin(), ref.end() - 1);
  EXPECT_THROW(synthesize_record(shorter, t, g, kDt), std::invalid_argument);
  EXPECT_THROW(synthesize_record(ref, t, g, 0.0), std::invalid_argument);
}

TEST(Synthesize, IntegerDelayShiftsTheReference) {
  // d = 15 m, c = 3e8: Az 0, El = acos(0.64) gives tau2 = 32 ns = 8 samples.
  TrackParams p;
  p.azimuth_start_deg = 0.0;
  p.elevation_start_deg = std::acos(0.64) * 180.0 / std::numbers::pi;
  const auto t = make_track(TrackKind::constant, 30, p, 0, 256, 16);
  const auto ref = band_limited_noise(t.record_length(), kDt, 40e6, 80e6, 8);
  const auto sim = synthesize_record(ref, t, {15.0, 3e8}, kDt);
  const auto& b = sim.record.channels[0];
  const auto& d = sim.record.channels[2];
  const auto& c = sim.record.channels[1];
  double worst_d = 0.0, worst_c = 0.0;
  for (std::size_t i = 300; i + 300 < b.size(); ++i) {
    worst_d = std::max(worst_d, std::abs(d[i] - b[i - 8]));
    worst_c = std::max(worst_c, std::abs(c[i] - b[i]));
  }
  EXPECT_LT(worst_d, 1e-9);
  EXPECT_LT(worst_c, 1e-9);
}

TEST(Awgn, VarianceMatchesSnrAndIsSeeded) {
  const auto x = band_limited_noise(100000, kDt, 40e6, 80e6, 1);
  EXPECT_EQ(add_awgn(x, kNoNoise, 1), x);
  const auto y = add_awgn(x, 0.0, 7);
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v += (y[i] - x[i]) * (y[i] - x[i]);
  EXPECT_NEAR(v / static_cast<double>(x.size()), 1.0, 0.05);
  EXPECT_EQ(y, add_awgn(x, 0.0, 7));
  EXPECT_NE(y, add_awgn(x, 0.0, 8));
  const auto z = add_awgn(x, 10.0, 7);
  double v10 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v10 += (z[i] - x[i]) * (z[i] - x[i]);
  EXPECT_NEAR(v10 / static_cast<double>(x.size()), 0.1, 0.005);
  const std::vector<double> zeros(100, 0.0);
  EXPECT_THROW(add_awgn(zeros, 10.0, 1), std::invalid_argument);
  EXPECT_EQ(add_awgn(zeros, kNoNoise, 1), zeros);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(TruthCsv, RoundTripsTrackAndWindowing) {
  const auto dir = test_support::scratch_dir("simulate_truth");
  TrackParams p;
  const auto t = make_track(TrackKind::random_walk, 12, p, 3, 128, 4);
  const auto ref = band_limited_noise(t.record_length(), kDt, 40e6, 80e6, 4);
  const auto sim = synthesize_record(ref, t, {}, kDt);
  EXPECT_EQ(truth_path_for(dir / "rec.bin"), dir / "rec.truth.csv");
  write_truth_csv(truth_path_for(dir / "rec.bin"), sim);
  const auto back = read_truth_csv(dir / "rec.truth.csv");
  EXPECT_EQ(back.track.window_length, 128u);
  EXPECT_EQ(back.track.hop, 4u);
  ASSERT_EQ(back.track.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_NEAR(back.track.points[i].azimuth_deg, t.points[i].azimuth_deg, 1e-9);
    EXPECT_NEAR(back.track.points[i].elevation_deg, t.points[i].elevation_deg, 1e-9);
    EXPECT_NEAR(back.tdoa[i].tau1_s, sim.tdoa[i].tau1_s, 1e-20);
  }
  EXPECT_THROW(read_truth_csv(dir / "absent.truth.csv"), std::runtime_error);
}
