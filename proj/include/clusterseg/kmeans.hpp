#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "clusterseg/image.hpp"

namespace clusterseg {

struct KMeansConfig {
  std::size_t k = 2;
  std::size_t max_iter = 100;

  void validate() const {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > kNumBins) throw std::invalid_argument("kmeans: k must be <= 256");
    if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
  }
};

/// Cluster index for each of the 256 intensity bins.
using BinAssignment = std::array<std::size_t, kNumBins>;

struct KMeansResult {
  std::vector<double> centroids;
  BinAssignment bin_assignments{};
  std::size_t iterations = 0;
  bool converged = false;
  /// Centroids after initialization (front) and after every update.
  std::vector<std::vector<double>> centroid_trace;
};

/// Evenly spaced seeds i*m/(k+1) for i = 1..k.
inline std::vector<double> init_centroids(std::size_t k, double m) {
  if (k == 0) throw std::invalid_argument("init_centroids: k must be >= 1");
  if (!(m > 0.0)) throw std::invalid_argument("init_centroids: max intensity must be > 0");
  std::vector<double> c(k);
  for (std::size_t i = 0; i < k; ++i) {
    c[i] = static_cast<double>(i + 1) * m / static_cast<double>(k + 1);
  }
  return c;
}

/// Index of the centroid nearest to `value`; ties go to the lowest index.
inline std::size_t nearest_centroid(std::span<const double> centroids, double value) {
  std::size_t best = 0;
  double best_d = std::abs(value - centroids[0]);
  for (std::size_t i = 1; i < centroids.size(); ++i) {
    const double d = std::abs(value - centroids[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline BinAssignment assign_bins(std::span<const double> centroids) {
  if (centroids.empty()) throw std::invalid_argument("assign_bins: no centroids");
  BinAssignment a{};
  for (std::size_t v = 0; v < kNumBins; ++v) a[v] = nearest_centroid(centroids, static_cast<double>(v));
  return a;
}

/// Histogram-weighted mean of the bins owned by each cluster. A cluster
/// owning no pixels keeps its previous centroid.
inline std::vector<double> update_centroids(const BinAssignment& assignments, const Histogram& hist,
                                            std::span<const double> old) {
  const std::size_t k = old.size();
  std::vector<double> weighted(k, 0.0);
  std::vector<double> mass(k, 0.0);
  for (std::size_t v = 0; v < kNumBins; ++v) {
    const std::size_t c = assignments[v];
    if (c >= k) throw std::invalid_argument("update_centroids: assignment out of range");
    const auto h = static_cast<double>(hist.counts[v]);
    weighted[c] += static_cast<double>(v) * h;
    mass[c] += h;
  }
  std::vector<double> next(old.begin(), old.end());
  for (std::size_t c = 0; c < k; ++c) {
    if (mass[c] > 0.0) next[c] = weighted[c] / mass[c];
  }
  return next;
}

namespace detail {

// True when some occupied bin changed cluster. Empty bins carry no pixels,
// so their movement does not count as an object moving.
inline bool occupied_bin_moved(const BinAssignment& before, const BinAssignment& after, const Histogram& hist) {
  for (std::size_t v = 0; v < kNumBins; ++v) {
    if (hist.counts[v] != 0 && before[v] != after[v]) return true;
  }
  return false;
}

}  // namespace detail

/// Histogram-weighted K-Means over intensity. Seeds come from
/// init_centroids(k, max intensity); iteration stops once an update leaves
/// every pixel in its cluster, or after cfg.max_iter updates.
inline KMeansResult run_kmeans(const GrayImage& img, const KMeansConfig& cfg) {
  cfg.validate();
  const Histogram hist = compute_histogram(img);

  KMeansResult res;
  res.centroids = init_centroids(cfg.k, img.max_intensity());
  res.centroid_trace.push_back(res.centroids);
  BinAssignment assignment = assign_bins(res.centroids);

  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    res.centroids = update_centroids(assignment, hist, res.centroids);
    res.centroid_trace.push_back(res.centroids);
    ++res.iterations;
    BinAssignment next = assign_bins(res.centroids);
    const bool moved = detail::occupied_bin_moved(assignment, next, hist);
    assignment = next;
    if (!moved) {
      res.converged = true;
      break;
    }
  }
  res.bin_assignments = assignment;
  return res;
}

}  // namespace clusterseg
