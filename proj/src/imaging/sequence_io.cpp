#include <cstring>
#include <string>

#include "sentry/imaging.hpp"

namespace sentry {

namespace {

constexpr char kMagic[6] = {'S', 'R', 'S', 'E', 'Q', '1'};
constexpr std::size_t kHeaderSize = 6 + 4 + 4 + 1 + 4;
constexpr std::size_t kFrameStampSize = 8 + 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_sequence(const FrameSequence& seq) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  const int w = seq.empty() ? 0 : seq.front().width();
  const int h = seq.empty() ? 0 : seq.front().height();
  const auto fmt = seq.empty() ? PixelFormat::Gray8 : seq.front().format();
  put_le<std::uint32_t>(out, std::uint32_t(w));
  put_le<std::uint32_t>(out, std::uint32_t(h));
  out.push_back(std::uint8_t(fmt));
  put_le<std::uint32_t>(out, std::uint32_t(seq.size()));
  for (const auto& f : seq) {
    put_le<std::uint64_t>(out, f.timestamp_ms());
    put_le<std::uint64_t>(out, f.seq());
    out.insert(out.end(), f.data().begin(), f.data().end());
  }
  return out;
}

FrameSequence decode_sequence(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw ParseError("truncated sequence header", bytes.size());
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw ParseError("bad sequence magic", 0);
  const auto w = get_le<std::uint32_t>(bytes, 6);
  const auto h = get_le<std::uint32_t>(bytes, 10);
  const auto fmt_byte = bytes[14];
  const auto count = get_le<std::uint32_t>(bytes, 15);
  if (fmt_byte > 1) throw ParseError("unknown pixel format", 14);
  const auto fmt = PixelFormat(fmt_byte);
  if (count > 0 && (w == 0 || h == 0 || w > 16384 || h > 16384))
    throw ParseError("implausible frame dimensions", 6);

  const std::size_t payload = std::size_t(w) * h * bytes_per_pixel(fmt);
  FrameSequence seq;
  std::size_t at = kHeaderSize;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (bytes.size() - at < kFrameStampSize + payload)
      throw ParseError("frame " + std::to_string(i) + " truncated", at);
    const auto ts = get_le<std::uint64_t>(bytes, at);
    const auto sq = get_le<std::uint64_t>(bytes, at + 8);
    at += kFrameStampSize;
    std::vector<std::uint8_t> data(bytes.begin() + std::ptrdiff_t(at),
                                   bytes.begin() + std::ptrdiff_t(at + payload));
    at += payload;
    try {
      seq.push_back(Frame(int(w), int(h), fmt, std::move(data), ts, sq));
    } catch (const ParameterError& e) {
      throw ParseError("frame " + std::to_string(i) + ": " + e.what(), at - payload);
    }
  }
  if (at != bytes.size()) throw ParseError("trailing bytes after last frame", at);
  return seq;
}

void save_sequence(const std::filesystem::path& path, const FrameSequence& seq) {
  write_file_bytes(path, encode_sequence(seq));
}

FrameSequence load_sequence(const std::filesystem::path& path) {
  return decode_sequence(read_file_bytes(path));
}

}  // namespace sentry
