#include <fstream>
#include <iterator>
#include <string>

#include "sentry/imaging.hpp"
#include "sentry/kernels.hpp"

namespace sentry {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : ImagingError(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

Frame::Frame(int width, int height, PixelFormat format, std::uint64_t timestamp_ms,
             std::uint64_t seq)
    : Frame(width, height, format,
            std::vector<std::uint8_t>(std::size_t(width > 0 ? width : 0) *
                                      std::size_t(height > 0 ? height : 0) *
                                      bytes_per_pixel(format)),
            timestamp_ms, seq) {}

Frame::Frame(int width, int height, PixelFormat format, std::vector<std::uint8_t> data,
             std::uint64_t timestamp_ms, std::uint64_t seq)
    : width_(width),
      height_(height),
      format_(format),
      data_(std::move(data)),
      timestamp_ms_(timestamp_ms),
      seq_(seq) {
  if (width < 1 || height < 1) throw ParameterError("frame dimensions must be positive");
  if (format != PixelFormat::Gray8 && format != PixelFormat::Rgb24)
    throw ParameterError("unknown pixel format");
  if (data_.size() != pixel_count() * bytes_per_pixel(format))
    throw ParameterError("frame data length does not match dimensions");
}

void FrameSequence::push_back(Frame f) {
  if (!frames_.empty()) {
    const Frame& last = frames_.back();
    if (!last.same_shape(f)) throw ParameterError("frame shape differs from sequence");
    if (f.seq() <= last.seq()) throw ParameterError("frame seq must strictly increase");
    if (f.timestamp_ms() < last.timestamp_ms())
      throw ParameterError("frame timestamps must not decrease");
  }
  frames_.push_back(std::move(f));
}

Frame to_gray(const Frame& rgb) {
  if (rgb.format() != PixelFormat::Rgb24) throw FormatError("to_gray expects an RGB24 frame");
  Frame out(rgb.width(), rgb.height(), PixelFormat::Gray8, rgb.timestamp_ms(), rgb.seq());
  kernels::parallel::luma(rgb.data(), out.data());
  return out;
}

Frame gray_to_rgb(const Frame& gray) {
  if (gray.format() != PixelFormat::Gray8)
    throw FormatError("gray_to_rgb expects a GRAY8 frame");
  Frame out(gray.width(), gray.height(), PixelFormat::Rgb24, gray.timestamp_ms(), gray.seq());
  auto src = gray.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw std::ios_base::failure("read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

}  // namespace sentry
