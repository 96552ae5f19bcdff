#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "itfmap/signals.hpp"
#include "text_util.hpp"

namespace itfmap {
namespace {

constexpr std::array<char, 4> kMagic{'I', 'T', 'F', 'R'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

/// The double nearest the float's shortest decimal form, so a stored
/// 4e-9f reads back as 4e-9 rather than 3.9999998868722741e-09.
double widen(float v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RecordFormatError("cannot open record file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SampleRecord parse_csv(const std::string& text, const std::filesystem::path& path) {
  SampleRecord rec;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto kv = detail::trim(body.substr(1));
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = detail::trim(kv.substr(0, eq));
      const auto value = detail::trim(kv.substr(eq + 1));
      if (key == "dt") {
        const auto dt = detail::parse_double(value);
        if (!dt) throw RecordFormatError("malformed header: dt=" + std::string(value));
        rec.sample_interval = *dt;
      } else if (key == "label") {
        rec.label = std::string(value);
      }
      continue;
    }
    const auto fields = detail::split(body, ',');
    if (fields.size() != kChannelCount) {
      throw RecordFormatError(path.string() + ":" + std::to_string(line_no) + ": channel count " +
                              std::to_string(fields.size()) + " != 3");
    }
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      const auto v = detail::parse_double(fields[c]);
      if (!v) {
        throw RecordFormatError(path.string() + ":" + std::to_string(line_no) +
                                ": not a number: '" + std::string(fields[c]) + "'");
      }
      rec.channels[c].push_back(*v);
    }
  }
  if (!(rec.sample_interval > 0.0)) {
    throw RecordFormatError("malformed header: sample interval must be positive");
  }
  return rec;
}

SampleRecord parse_binary(const std::string& bytes, const std::filesystem::path& path) {
  if (bytes.size() < kHeaderBytes || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw RecordFormatError("malformed header: missing ITFR magic in " + path.string());
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t length = get_u32(p + 4);
  const double dt = widen(std::bit_cast<float>(get_u32(p + 8)));
  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (payload != static_cast<std::size_t>(length) * kChannelCount * sizeof(float)) {
    throw RecordFormatError("channel count/length mismatch: payload of " + std::to_string(payload) +
                            " bytes does not hold 3 channels of " + std::to_string(length) +
                            " samples");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw RecordFormatError("malformed header: non-positive sample interval");

  SampleRecord rec;
  rec.sample_interval = dt;
  const unsigned char* data = p + kHeaderBytes;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto& ch = rec.channels[c];
    ch.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
      ch[i] = static_cast<double>(std::bit_cast<float>(get_u32(data + 4 * (c * length + i))));
    }
  }
  return rec;
}

}  // namespace

RecordFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".csv" ? RecordFormat::csv : RecordFormat::raw_binary;
}

SampleRecord load_record(const std::filesystem::path& path, RecordFormat format) {
  const std::string bytes = read_file(path);
  SampleRecord rec = format == RecordFormat::csv ? parse_csv(bytes, path) : parse_binary(bytes, path);
  try {
    rec.validate();
  } catch (const std::invalid_argument& e) {
    throw RecordFormatError(e.what());
  }
  return rec;
}

void save_record(const SampleRecord& record, const std::filesystem::path& path, RecordFormat format,
                 const std::vector<std::string>& comments) {
  record.validate();
  std::string out;
  if (format == RecordFormat::csv) {
    out += "# dt=" + detail::format_double(record.sample_interval) + "\n";
    out += "# label=" + record.label + "\n";
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < record.length(); ++i) {
      out += detail::format_double(record.channels[0][i]);
      out += ',';
      out += detail::format_double(record.channels[1][i]);
      out += ',';
      out += detail::format_double(record.channels[2][i]);
      out += '\n';
    }
  } else {
    if (record.length() > UINT32_MAX) throw std::invalid_argument("record too long for raw-binary format");
    out.reserve(kHeaderBytes + record.length() * kChannelCount * sizeof(float));
    out.append(kMagic.begin(), kMagic.end());
    put_u32(out, static_cast<std::uint32_t>(record.length()));
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(record.sample_interval)));
    put_u32(out, 0);  // reserved
    for (const auto& ch : record.channels) {
      for (double v : ch) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  write_file(path, out);
}

}  // namespace itfmap
