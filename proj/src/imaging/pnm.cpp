#include <cctype>
#include <string>

#include "sentry/imaging.hpp"

namespace sentry {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  // Whitespace and '#' comments between tokens.
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000) throw ParseError(std::string(what) + " out of range", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
    return v;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw ParseError("expected whitespace after maxval", pos_);
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Frame read_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw ParseError("bad magic, expected P5 or P6", 0);
  const PixelFormat format = bytes[1] == '5' ? PixelFormat::Gray8 : PixelFormat::Rgb24;

  HeaderReader hdr(bytes.subspan(2));
  const auto width = hdr.number("width");
  const auto height = hdr.number("height");
  hdr.skip_separators();
  const std::size_t maxval_at = 2 + hdr.pos();
  const auto maxval = hdr.number("maxval");
  if (maxval != 255) throw ParseError("maxval must be 255", maxval_at);
  if (width == 0 || height == 0) throw ParseError("zero image dimension", 2);
  hdr.single_whitespace();

  const std::size_t body = 2 + hdr.pos();
  const std::size_t need = width * height * bytes_per_pixel(format);
  if (bytes.size() - body < need) throw ParseError("truncated raster", bytes.size());
  if (bytes.size() - body > need) throw ParseError("trailing bytes after raster", body + need);

  std::vector<std::uint8_t> data(bytes.begin() + std::ptrdiff_t(body), bytes.end());
  return Frame(int(width), int(height), format, std::move(data));
}

std::vector<std::uint8_t> write_pnm(const Frame& f) {
  const std::string header = std::string(f.format() == PixelFormat::Gray8 ? "P5" : "P6") + "\n" +
                             std::to_string(f.width()) + " " + std::to_string(f.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), f.data().begin(), f.data().end());
  return out;
}

Frame load_pnm(const std::filesystem::path& path) { return read_pnm(read_file_bytes(path)); }

void save_pnm(const std::filesystem::path& path, const Frame& f) {
  write_file_bytes(path, write_pnm(f));
}

}  // namespace sentry
