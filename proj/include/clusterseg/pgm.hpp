#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterseg/image.hpp"

namespace clusterseg {

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Cursor over an in-memory PNM buffer. Header tokens may be separated by
// any whitespace and interleaved with '#' comments running to end of line.
class PnmCursor {
 public:
  PnmCursor(const std::string& data, std::size_t pos) : data_(data), pos_(pos) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const unsigned char c = static_cast<unsigned char>(data_[pos_]);
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(data_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw PgmError(std::string("PGM: ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start) throw PgmError(std::string("PGM: malformed header, expected ") + what);
    return value;
  }

  // Exactly one whitespace byte separates maxval from binary raster data.
  void consume_single_whitespace() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      throw PgmError("PGM: malformed header, missing whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a P2 (ASCII) or P5 (binary) PGM with maxval <= 255.
inline GrayImage decode_pgm(const std::string& data) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5')) {
    throw PgmError("PGM: unsupported magic number (expected P2 or P5)");
  }
  const bool binary = data[1] == '5';
  if (data.size() < 3 || !(std::isspace(static_cast<unsigned char>(data[2])) || data[2] == '#')) {
    throw PgmError("PGM: malformed header after magic number");
  }
  detail::PnmCursor c(data, 2);
  const unsigned long width = c.read_uint("width");
  const unsigned long height = c.read_uint("height");
  const unsigned long maxval = c.read_uint("maxval");
  if (width == 0 || height == 0) throw PgmError("PGM: zero image dimension");
  if (maxval == 0) throw PgmError("PGM: maxval must be positive");
  if (maxval > 255) {
    throw PgmError("PGM: maxval " + std::to_string(maxval) + " unsupported (depth > 8 bits)");
  }
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> pixels;
  pixels.reserve(n);

  if (binary) {
    c.consume_single_whitespace();
    if (c.remaining() < n) throw PgmError("PGM: truncated raster data");
    const std::size_t off = c.position();
    for (std::size_t i = 0; i < n; ++i) {
      const auto byte = static_cast<unsigned char>(data[off + i]);
      if (byte > maxval) throw PgmError("PGM: sample exceeds maxval");
      pixels.push_back(static_cast<double>(byte));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned long v = 0;
      try {
        v = c.read_uint("sample");
      } catch (const PgmError&) {
        throw PgmError("PGM: truncated or malformed ASCII raster");
      }
      if (v > maxval) throw PgmError("PGM: sample exceeds maxval");
      pixels.push_back(static_cast<double>(v));
    }
  }
  return GrayImage(width, height, std::move(pixels));
}

/// Canonical P5 encoding: "P5\n<w> <h>\n255\n" then w*h bytes.
/// Samples are rounded half-to-even and clamped to [0, 255].
inline std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.reserve(out.size() + img.size());
  for (double v : img.pixels()) {
    const double r = std::clamp(std::nearbyint(v), 0.0, 255.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(r)));
  }
  return out;
}

inline GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(data);
}

inline void save_image(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PgmError("cannot write " + path.string());
  const std::string bytes = encode_pgm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw PgmError("write failed for " + path.string());
}

}  // namespace clusterseg
