#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace itfmap {

/// Antenna channels of the crossed-baseline array. B is the shared corner;
/// BC and BD are the two orthogonal baselines.
enum class Channel : std::size_t { B = 0, C = 1, D = 2 };

inline constexpr std::size_t kChannelCount = 3;
inline constexpr double kDefaultSampleInterval = 4e-9;  // 250 MS/s

/// Three synchronized sample channels plus acquisition metadata.
struct SampleRecord {
  std::array<std::vector<double>, kChannelCount> channels;
  double sample_interval = kDefaultSampleInterval;
  std::string label;

  std::size_t length() const { return channels[0].size(); }
  const std::vector<double>& channel(Channel c) const {
    return channels[static_cast<std::size_t>(c)];
  }
  std::vector<double>& channel(Channel c) { return channels[static_cast<std::size_t>(c)]; }

  /// Throws std::invalid_argument when channel lengths differ or the
  /// sample interval is not strictly positive.
  void validate() const;
};

/// csv: `# dt=<seconds>` and `# label=<text>` header lines, then one
/// `b,c,d` row per sample. raw_binary (little-endian): "ITFR", u32 sample
/// count, f32 sample interval, 4 reserved zero bytes, then channels B, C, D
/// as f32 blocks. The interval is read back through its shortest decimal
/// form.
enum class RecordFormat { csv, raw_binary };

/// Picks the format from the file extension: ".csv" is CSV, anything else
/// is treated as raw binary.
RecordFormat format_from_path(const std::filesystem::path& path);

/// Errors from record files: unreadable, malformed or inconsistent content.
class RecordFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SampleRecord load_record(const std::filesystem::path& path, RecordFormat format);
inline SampleRecord load_record(const std::filesystem::path& path) {
  return load_record(path, format_from_path(path));
}

/// Writes `record`. For CSV, `comments` are emitted as extra `# ` header
/// lines after dt and label. Throws std::runtime_error when the destination
/// cannot be written.
void save_record(const SampleRecord& record, const std::filesystem::path& path,
                 RecordFormat format, const std::vector<std::string>& comments = {});

struct SegmentationPlan {
  std::size_t window_length = 256;
  std::size_t hop = 1;

  /// N = floor((record_length - window_length) / hop) + 1. Throws
  /// std::invalid_argument when the window does not fit or hop is zero.
  std::size_t count(std::size_t record_length) const;
};

/// A read-only view of one sliding window. Segments alias the record's
/// storage, so the record must outlive its windows.
struct Window {
  std::size_t index = 0;
  std::size_t start = 0;
  std::array<std::span<const double>, kChannelCount> segments;

  std::size_t length() const { return segments[0].size(); }
};

std::vector<Window> segment(const SampleRecord& record, const SegmentationPlan& plan);

struct NormalizedSegment {
  std::vector<double> values;
  bool degenerate = false;
};

/// Removes the mean and scales to max |value| = 1. A constant input maps
/// to all zeros and is flagged degenerate.
NormalizedSegment normalize_segment(std::span<const double> samples);

/// Owning, amplitude-normalized copy of a window.
struct NormalizedWindow {
  std::size_t index = 0;
  std::size_t start = 0;
  std::array<std::vector<double>, kChannelCount> segments;
  std::array<bool, kChannelCount> degenerate{};

  bool any_degenerate() const { return degenerate[0] || degenerate[1] || degenerate[2]; }
  const std::vector<double>& segment(Channel c) const {
    return segments[static_cast<std::size_t>(c)];
  }
  Window view() const;
};

/// Throws std::invalid_argument when a segment has fewer than 2 samples.
NormalizedWindow normalize_window(const Window& window);

}  // namespace itfmap
