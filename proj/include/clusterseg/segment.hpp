#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clusterseg/fcm.hpp"
#include "clusterseg/image.hpp"
#include "clusterseg/kmeans.hpp"

namespace clusterseg {

/// Per-pixel cluster labels, row-major.
class LabelMask {
 public:
  LabelMask() = default;

  LabelMask(std::size_t width, std::size_t height, std::size_t clusters, std::vector<std::size_t> labels)
      : width_(width), height_(height), clusters_(clusters), labels_(std::move(labels)) {
    if (width_ == 0 || height_ == 0) throw std::invalid_argument("LabelMask: empty dimensions");
    if (clusters_ == 0) throw std::invalid_argument("LabelMask: cluster count must be >= 1");
    if (labels_.size() != width_ * height_) throw std::invalid_argument("LabelMask: label count mismatch");
    for (auto l : labels_) {
      if (l >= clusters_) throw std::invalid_argument("LabelMask: label " + std::to_string(l) + " out of range");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t clusters() const noexcept { return clusters_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const std::size_t> labels() const noexcept { return labels_; }
  std::size_t at(std::size_t row, std::size_t col) const { return labels_.at(row * width_ + col); }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t clusters_ = 0;
  std::vector<std::size_t> labels_;
};

/// Hard labels by nearest centroid, ties to the lowest index.
inline LabelMask mask_from_centroids(const GrayImage& img, std::span<const double> centroids) {
  if (centroids.empty()) throw std::invalid_argument("mask_from_centroids: no centroids");
  std::vector<std::size_t> labels;
  labels.reserve(img.size());
  for (double v : img.pixels()) labels.push_back(nearest_centroid(centroids, v));
  return LabelMask(img.width(), img.height(), centroids.size(), std::move(labels));
}

/// Defuzzified labels: argmax membership per pixel, ties to the lowest index.
inline LabelMask mask_from_membership(const Matrix& mu, std::size_t width, std::size_t height) {
  if (mu.rows() == 0) throw std::invalid_argument("mask_from_membership: empty membership");
  if (mu.cols() != width * height) throw std::invalid_argument("mask_from_membership: shape mismatch");
  std::vector<std::size_t> labels(mu.cols());
  for (std::size_t k = 0; k < mu.cols(); ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < mu.rows(); ++i) {
      if (mu(i, k) > mu(best, k)) best = i;
    }
    labels[k] = best;
  }
  return LabelMask(width, height, mu.rows(), std::move(labels));
}

/// Keeps pixels labelled `cluster`, zeroes the rest.
inline GrayImage apply_mask(const GrayImage& img, const LabelMask& mask, std::size_t cluster) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw std::invalid_argument("apply_mask: mask and image dimensions differ");
  }
  if (cluster >= mask.clusters()) {
    throw std::out_of_range("apply_mask: cluster " + std::to_string(cluster) + " out of range");
  }
  std::vector<double> out(img.size(), 0.0);
  const auto px = img.pixels();
  const auto lab = mask.labels();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (lab[k] == cluster) out[k] = px[k];
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

/// Visual encoding of a mask: label i maps to round(255 * i / (k - 1)).
/// A single-cluster mask renders black.
inline GrayImage mask_to_image(const LabelMask& mask) {
  const std::size_t k = mask.clusters();
  std::vector<double> px;
  px.reserve(mask.size());
  for (auto l : mask.labels()) {
    px.push_back(k > 1 ? std::nearbyint(255.0 * static_cast<double>(l) / static_cast<double>(k - 1)) : 0.0);
  }
  return GrayImage(mask.width(), mask.height(), std::move(px));
}

struct RegionStats {
  double mean = 0.0;
  double stddev = 0.0;
  /// Percent; absent when mean == 0.
  std::optional<double> cv;
  std::size_t count = 0;
};

/// 100 * std / mean, or nothing when the mean is not positive.
inline std::optional<double> coefficient_of_variation(double mean, double stddev) {
  if (!(mean > 0.0)) return std::nullopt;
  return 100.0 * stddev / mean;
}

/// Mean, population standard deviation and CV of the pixels labelled
/// `cluster`, or of every pixel when no cluster is given.
inline RegionStats region_stats(const GrayImage& img, const LabelMask& mask, std::optional<std::size_t> cluster = {}) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw std::invalid_argument("region_stats: mask and image dimensions differ");
  }
  if (cluster && *cluster >= mask.clusters()) {
    throw std::out_of_range("region_stats: cluster " + std::to_string(*cluster) + " out of range");
  }
  const auto px = img.pixels();
  const auto lab = mask.labels();
  auto selected = [&](std::size_t k) { return !cluster || lab[k] == *cluster; };

  RegionStats s;
  double sum = 0.0;
  for (std::size_t k = 0; k < px.size(); ++k) {
    if (selected(k)) {
      sum += px[k];
      ++s.count;
    }
  }
  if (s.count == 0) throw std::invalid_argument("region_stats: empty region");
  s.mean = sum / static_cast<double>(s.count);
  double ss = 0.0;
  for (std::size_t k = 0; k < px.size(); ++k) {
    if (selected(k)) ss += (px[k] - s.mean) * (px[k] - s.mean);
  }
  s.stddev = std::sqrt(ss / static_cast<double>(s.count));
  s.cv = coefficient_of_variation(s.mean, s.stddev);
  return s;
}

namespace detail {

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string pad_left(std::string s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

inline std::string pad_right(std::string s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace detail

/// Three-row comparison table (mean, std, cv) with one column per method.
inline std::string compare_report(const RegionStats& a, const RegionStats& b, std::string_view name_a,
                                  std::string_view name_b) {
  constexpr std::size_t kLabelWidth = 26;
  const std::size_t col = std::max<std::size_t>({12, name_a.size() + 2, name_b.size() + 2});
  auto row = [&](std::string label, const std::string& x, const std::string& y) {
    return detail::pad_right(std::move(label), kLabelWidth) + detail::pad_left(x, col) + detail::pad_left(y, col) +
           "\n";
  };
  auto cv = [](const RegionStats& s) { return s.cv ? detail::fixed4(*s.cv) : std::string("n/a"); };
  std::string out;
  out += row("Parameter", std::string(name_a), std::string(name_b));
  out += row("Average voxel intensity", detail::fixed4(a.mean), detail::fixed4(b.mean));
  out += row("Standard Deviation", detail::fixed4(a.stddev), detail::fixed4(b.stddev));
  out += row("Coefficient of variance", cv(a), cv(b));
  return out;
}

}  // namespace clusterseg
