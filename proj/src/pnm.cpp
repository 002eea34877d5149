#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "klg/raster.hpp"

namespace klg {

namespace {

class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  /// Reads an unsigned decimal token; `code` is the error raised on failure.
  unsigned long read_uint(Errc code, const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    if (pos_ >= bytes_.size()) {
      throw PnmError(code == Errc::MalformedPayload ? Errc::TruncatedPayload : code, start,
                     std::string("unexpected end of data reading ") + what);
    }
    unsigned long value = 0;
    const char* first = reinterpret_cast<const char*>(bytes_.data()) + pos_;
    const char* last = reinterpret_cast<const char*>(bytes_.data()) + bytes_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) {
      throw PnmError(code, start, std::string("expected unsigned integer for ") + what);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    if (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw PnmError(code, pos_, std::string("garbage after ") + what);
    }
    return value;
  }

  std::uint8_t raw_byte() { return bytes_[pos_++]; }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw PnmError(Errc::MalformedHeader, pos_, "expected whitespace after maxval");
    }
    ++pos_;
  }

  std::uint8_t peek(std::size_t k) const { return bytes_[pos_ + k]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint8_t rescale(unsigned long v, unsigned long maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>(std::lround(static_cast<double>(v) * 255.0 / static_cast<double>(maxval)));
}

void append(std::vector<std::uint8_t>& out, const std::string& s) {
  out.insert(out.end(), s.begin(), s.end());
}

std::string header(char magic, std::size_t w, std::size_t h) {
  return std::string("P") + magic + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

template <class Sample>
std::vector<std::uint8_t> encode(char ascii_magic, char binary_magic, std::size_t w, std::size_t h,
                                 std::size_t channels, PnmEncoding enc, Sample sample) {
  std::vector<std::uint8_t> out;
  const bool binary = enc == PnmEncoding::Binary;
  append(out, header(binary ? binary_magic : ascii_magic, w, h));
  const std::size_t per_row = w * channels;
  for (std::size_t row = 0; row < h; ++row) {
    for (std::size_t k = 0; k < per_row; ++k) {
      const std::uint8_t v = sample(row * per_row + k);
      if (binary) {
        out.push_back(v);
      } else {
        if (k != 0) out.push_back(' ');
        append(out, std::to_string(v));
      }
    }
    if (!binary) out.push_back('\n');
  }
  return out;
}

}  // namespace

AnyImage load_pnm(std::span<const std::uint8_t> bytes, PnmReadOptions opts) {
  PnmReader in(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw PnmError(Errc::MalformedHeader, 0, "missing P magic");
  }
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw PnmError(Errc::MalformedHeader, 1, std::string("unsupported PNM kind P") + kind);
  }
  in.raw_byte();
  in.raw_byte();
  if (in.remaining() > 0 && !std::isspace(in.peek(0)) && in.peek(0) != '#') {
    throw PnmError(Errc::MalformedHeader, 2, "expected whitespace after magic");
  }

  const std::size_t width_at = in.pos();
  const auto width = in.read_uint(Errc::MalformedHeader, "width");
  const auto height = in.read_uint(Errc::MalformedHeader, "height");
  if (width == 0 || height == 0) {
    throw PnmError(Errc::MalformedHeader, width_at, "zero image dimension");
  }
  in.skip_space_and_comments();
  const std::size_t maxval_at = in.pos();
  const auto maxval = in.read_uint(Errc::MalformedHeader, "maxval");
  if (maxval == 0 || maxval > 255) {
    throw PnmError(Errc::UnsupportedMaxval, maxval_at, "maxval " + std::to_string(maxval));
  }

  const bool color = kind == '3' || kind == '6';
  const bool ascii = kind == '2' || kind == '3';
  const std::size_t channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;

  std::vector<std::uint8_t> samples(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.pos();
      const auto v = in.read_uint(Errc::MalformedPayload, "sample");
      if (v > maxval) throw PnmError(Errc::MalformedPayload, at, "sample exceeds maxval");
      samples[i] = static_cast<std::uint8_t>(v);
    }
  } else {
    in.expect_single_whitespace();
    if (in.remaining() < count) {
      throw PnmError(Errc::TruncatedPayload, bytes.size(),
                     "need " + std::to_string(count) + " payload bytes, have " +
                         std::to_string(in.remaining()));
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.pos();
      const auto v = in.raw_byte();
      if (v > maxval) throw PnmError(Errc::MalformedPayload, at, "sample exceeds maxval");
      samples[i] = v;
    }
  }

  if (color) {
    std::vector<Rgb> px(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < px.size(); ++i) {
      px[i] = Rgb{rescale(samples[3 * i], maxval), rescale(samples[3 * i + 1], maxval),
                  rescale(samples[3 * i + 2], maxval)};
    }
    return RgbImage(width, height, std::move(px));
  }

  if (opts.gray_as_mask) {
    std::vector<std::uint8_t> bits(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i] != 0 && samples[i] != maxval) {
        throw PnmError(Errc::NotBinary, in.pos(), "sample " + std::to_string(i) + " is neither 0 nor maxval");
      }
      bits[i] = samples[i] ? 1 : 0;
    }
    return BinaryMask(width, height, std::move(bits));
  }

  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) values[i] = rescale(samples[i], maxval);
  return GrayImage(width, height, std::move(values));
}

std::vector<std::uint8_t> save_pnm(const RgbImage& img, PnmEncoding enc) {
  return encode('3', '6', img.width(), img.height(), 3, enc, [&](std::size_t k) {
    const Rgb& p = img[k / 3];
    switch (k % 3) {
      case 0: return p.r;
      case 1: return p.g;
      default: return p.b;
    }
  });
}

std::vector<std::uint8_t> save_pnm(const GrayImage& img, PnmEncoding enc) {
  return encode('2', '5', img.width(), img.height(), 1, enc, [&](std::size_t k) {
    const double v = std::clamp(std::round(img[k]), 0.0, 255.0);
    return static_cast<std::uint8_t>(v);
  });
}

std::vector<std::uint8_t> save_pnm(const BinaryMask& img, PnmEncoding enc) {
  return encode('2', '5', img.width(), img.height(), 1, enc,
                [&](std::size_t k) { return static_cast<std::uint8_t>(img[k] ? 255 : 0); });
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::Io, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::Io, "short write to " + path);
}

}  // namespace klg
