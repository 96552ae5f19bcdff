#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "itfmap/signals.hpp"
#include "oracles.hpp"
#include "scratch_dir.hpp"

using namespace itfmap;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

SampleRecord ramp_record(std::size_t n) {
  SampleRecord r;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    r.channels[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) r.channels[c][i] = static_cast<double>(i) + 0.25 * static_cast<double>(c);
  }
  return r;
}

}  // namespace

TEST(LoadRecord, CsvWithDtHeaderAndThousandRows) {
  const auto dir = test_support::scratch_dir("signals_csv");
  const auto path = dir / "rec.csv";
  {
    std::ofstream f(path);
    f << "# dt=4e-9\n# label=fixture\n";
    for (int i = 0; i < 1000; ++i) f << i << "," << -i << "," << 0.5 * i << "\n";
  }
  const auto rec = load_record(path);
  EXPECT_EQ(rec.length(), 1000u);
  EXPECT_DOUBLE_EQ(rec.sample_interval, 4e-9);
  EXPECT_EQ(rec.label, "fixture");
  EXPECT_DOUBLE_EQ(rec.channel(Channel::C)[10], -10.0);
  EXPECT_DOUBLE_EQ(rec.channel(Channel::D)[999], 499.5);
}

TEST(LoadRecord, CsvWithoutDtUsesDefaultInterval) {
  const auto path = test_support::scratch_dir("signals_nodt") / "rec.csv";
  std::ofstream(path) << "1,2,3\n4,5,6\n";
  EXPECT_DOUBLE_EQ(load_record(path).sample_interval, kDefaultSampleInterval);
}

TEST(LoadRecord, TwoColumnsIsAChannelCountError) {
  const auto path = test_support::scratch_dir("signals_2col") / "rec.csv";
  std::ofstream(path) << "# dt=4e-9\n1,2\n3,4\n";
  try {
    load_record(path);
    FAIL() << "expected RecordFormatError";
  } catch (const RecordFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("channel count"), std::string::npos) << e.what();
  }
}

TEST(LoadRecord, RejectsNonPositiveIntervalAndGarbage) {
  const auto dir = test_support::scratch_dir("signals_bad");
  std::ofstream(dir / "neg.csv") << "# dt=-1\n1,2,3\n";
  std::ofstream(dir / "nan.csv") << "# dt=4e-9\n1,x,3\n";
  EXPECT_THROW(load_record(dir / "neg.csv"), RecordFormatError);
  EXPECT_THROW(load_record(dir / "nan.csv"), RecordFormatError);
  EXPECT_THROW(load_record(dir / "missing.csv"), RecordFormatError);
  std::ofstream(dir / "bad.bin", std::ios::binary) << "NOPE0000000000000000";
  EXPECT_THROW(load_record(dir / "bad.bin"), RecordFormatError);
}

TEST(LoadRecord, BinaryRoundTripIsBitIdentical) {
  const auto dir = test_support::scratch_dir("signals_bin");
  SampleRecord rec;
  rec.sample_interval = 4e-9;
  const auto noise = oracle::gaussian(3 * 777, 5);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    rec.channels[c].assign(noise.begin() + static_cast<long>(c * 777), noise.begin() + static_cast<long>((c + 1) * 777));
  }
  save_record(rec, dir / "a.bin", RecordFormat::raw_binary);
  const auto back = load_record(dir / "a.bin");
  EXPECT_EQ(back.sample_interval, 4e-9);
  ASSERT_EQ(back.length(), 777u);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    for (std::size_t i = 0; i < 777; ++i) {
      EXPECT_EQ(back.channels[c][i], static_cast<double>(static_cast<float>(rec.channels[c][i])));
    }
  }
  save_record(back, dir / "b.bin", RecordFormat::raw_binary);
  EXPECT_EQ(slurp(dir / "a.bin"), slurp(dir / "b.bin"));
  EXPECT_EQ(slurp(dir / "a.bin").size(), 16u + 3u * 777u * 4u);
}

TEST(LoadRecord, BinaryLengthMismatchIsReported) {
  const auto dir = test_support::scratch_dir("signals_trunc");
  save_record(ramp_record(10), dir / "a.bin", RecordFormat::raw_binary);
  auto bytes = slurp(dir / "a.bin");
  bytes.resize(bytes.size() - 4);
  std::ofstream(dir / "t.bin", std::ios::binary) << bytes;
  EXPECT_THROW(load_record(dir / "t.bin"), RecordFormatError);
}

TEST(LoadRecord, CsvRoundTripIsExact) {
  const auto dir = test_support::scratch_dir("signals_csvrt");
  SampleRecord rec;
  rec.sample_interval = 4e-9;
  rec.label = "rt";
  const auto noise = oracle::gaussian(300, 9);
  for (std::size_t c = 0; c < kChannelCount; ++c) rec.channels[c].assign(noise.begin() + static_cast<long>(c * 100), noise.begin() + static_cast<long>((c + 1) * 100));
  save_record(rec, dir / "r.csv", RecordFormat::csv, {"extra comment"});
  const auto back = load_record(dir / "r.csv");
  EXPECT_EQ(back.channels, rec.channels);
  EXPECT_EQ(back.label, "rt");
}

TEST(Segment, CountsFollowTheFormula) {
  EXPECT_EQ((SegmentationPlan{256, 1}.count(300)), 45u);
  EXPECT_EQ((SegmentationPlan{256, 256}.count(512)), 2u);
  EXPECT_THROW((SegmentationPlan{256, 1}.count(255)), std::invalid_argument);
  EXPECT_THROW((SegmentationPlan{4, 0}.count(10)), std::invalid_argument);
  for (std::size_t len = 8; len < 60; len += 3) {
    for (std::size_t w = 1; w <= len; w += 5) {
      for (std::size_t hop = 1; hop < 9; ++hop) EXPECT_EQ((SegmentationPlan{w, hop}.count(len)), (len - w) / hop + 1);
    }
  }
}

TEST(Segment, WindowsStartAtMultiplesOfHopAndAreDisjointAtHopW) {
  const auto rec = ramp_record(512);
  const auto wins = segment(rec, {256, 256});
  ASSERT_EQ(wins.size(), 2u);
  EXPECT_EQ(wins[1].start, 256u);
  std::vector<double> joined;
  for (const auto& w : wins) joined.insert(joined.end(), w.segments[0].begin(), w.segments[0].end());
  EXPECT_EQ(joined, rec.channels[0]);

  const auto short_rec = ramp_record(100);
  const auto hop3 = segment(short_rec, {10, 3});
  for (std::size_t i = 0; i < hop3.size(); ++i) {
    EXPECT_EQ(hop3[i].index, i);
    EXPECT_EQ(hop3[i].start, 3 * i);
    EXPECT_DOUBLE_EQ(hop3[i].segments[2][0], static_cast<double>(3 * i) + 0.5);
  }
}

TEST(Normalize, TwoSampleAndConstantExamples) {
  const std::vector<double> a{1.0, 3.0};
  const auto n = normalize_segment(a);
  EXPECT_EQ(n.values, (std::vector<double>{-1.0, 1.0}));
  EXPECT_FALSE(n.degenerate);
  const std::vector<double> c{5.0, 5.0, 5.0};
  const auto z = normalize_segment(c);
  EXPECT_EQ(z.values, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_TRUE(z.degenerate);
}

TEST(Normalize, RandomSegmentHasZeroMeanUnitPeakAndIsIdempotent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto x = oracle::gaussian(256, seed, 3.0);
    for (double& v : x) v += 7.0;
    const auto n = normalize_segment(x);
    const double mean = std::accumulate(n.values.begin(), n.values.end(), 0.0) / 256.0;
    double peak = 0.0;
    for (double v : n.values) peak = std::max(peak, std::abs(v));
    EXPECT_LT(std::abs(mean), 1e-12);
    EXPECT_NEAR(peak, 1.0, 1e-12);
    const auto again = normalize_segment(n.values);
    for (std::size_t i = 0; i < 256; ++i) EXPECT_NEAR(again.values[i], n.values[i], 1e-12);
  }
}

TEST(Normalize, WindowFlagsDegenerateChannels) {
  auto rec = ramp_record(64);
  std::fill(rec.channels[2].begin(), rec.channels[2].end(), 1.5);
  const auto wins = segment(rec, {16, 16});
  const auto nw = normalize_window(wins[1]);
  EXPECT_FALSE(nw.degenerate[0]);
  EXPECT_TRUE(nw.degenerate[2]);
  EXPECT_TRUE(nw.any_degenerate());
  EXPECT_EQ(nw.start, 16u);
}

TEST(Record, ValidateRejectsUnequalChannels) {
  auto rec = ramp_record(10);
  rec.channels[1].pop_back();
  EXPECT_THROW(rec.validate(), std::invalid_argument);
  auto ok = ramp_record(10);
  ok.sample_interval = 0.0;
  EXPECT_THROW(ok.validate(), std::invalid_argument);
}
