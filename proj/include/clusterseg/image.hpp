#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace clusterseg {

/// Rectangular grid of intensities in [0, 255], stored row-major.
///
/// Samples are kept as doubles so that centroid arithmetic and segmented
/// outputs share one representation; 8-bit input is stored losslessly.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ == 0 || height_ == 0) {
      throw std::invalid_argument("GrayImage: width and height must be positive");
    }
    if (pixels_.size() != width_ * height_) {
      throw std::invalid_argument("GrayImage: expected " + std::to_string(width_ * height_) +
                                  " pixels, got " + std::to_string(pixels_.size()));
    }
    for (double v : pixels_) {
      if (!(v >= 0.0 && v <= 255.0)) {
        throw std::invalid_argument("GrayImage: intensity out of [0, 255]: " + std::to_string(v));
      }
    }
  }

  /// Constant image.
  GrayImage(std::size_t width, std::size_t height, double value)
      : GrayImage(width, height, std::vector<double>(width * height, value)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double at(std::size_t row, std::size_t col) const { return pixels_.at(row * width_ + col); }
  std::span<const double> pixels() const noexcept { return pixels_; }

  double max_intensity() const noexcept {
    double m = 0.0;
    for (double v : pixels_) m = v > m ? v : m;
    return m;
  }

  double min_intensity() const noexcept {
    double m = 255.0;
    for (double v : pixels_) m = v < m ? v : m;
    return m;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

inline constexpr std::size_t kNumBins = 256;

/// Pixel counts per integer intensity 0..255.
struct Histogram {
  std::array<std::uint64_t, kNumBins> counts{};

  std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// Integer bin of an intensity (round half to even, as in the PGM writer).
inline std::size_t intensity_bin(double v) noexcept {
  return static_cast<std::size_t>(std::nearbyint(v));
}

inline Histogram compute_histogram(const GrayImage& img) {
  Histogram h;
  for (double v : img.pixels()) ++h.counts[intensity_bin(v)];
  return h;
}

/// Row-major intensity vector; element r*width + c is pixel (r, c).
inline std::vector<double> flatten(const GrayImage& img) {
  return {img.pixels().begin(), img.pixels().end()};
}

/// Inverse of flatten.
inline GrayImage reshape(std::span<const double> values, std::size_t width, std::size_t height) {
  return GrayImage(width, height, std::vector<double>(values.begin(), values.end()));
}

}  // namespace clusterseg
