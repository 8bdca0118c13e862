#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterseg/image.hpp"
#include "clusterseg/kmeans.hpp"
#include "clusterseg/parallel.hpp"

namespace clusterseg {

/// Dense row-major matrix; rows are clusters, columns are pixels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Offset added to every pixel/center distance so memberships stay finite.
inline constexpr double kDistanceEpsilon = 1e-6;

struct FcmConfig {
  std::size_t ncluster = 2;
  double expo = 2.0;
  std::size_t max_iter = 3;
  double tol = 1e-5;

  void validate() const {
    if (ncluster < 2) throw std::invalid_argument("fcm: ncluster must be >= 2");
    if (!(expo > 1.0) || !std::isfinite(expo)) throw std::invalid_argument("fcm: fuzziness must be > 1");
    if (max_iter < 1) throw std::invalid_argument("fcm: max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("fcm: tol must be > 0");
  }
};

enum class FcmExit { kTolerance, kMaxIterations };

inline const char* to_string(FcmExit e) {
  return e == FcmExit::kTolerance ? "tolerance" : "max_iter";
}

struct FcmResult {
  std::vector<double> centers;
  Matrix membership;
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
  bool converged = false;
  FcmExit exit = FcmExit::kMaxIterations;
};

/// D(i, k) = |imgv[k] - centers[i]| + kDistanceEpsilon.
inline Matrix compute_distances(std::span<const double> centers, std::span<const double> imgv) {
  if (centers.empty() || imgv.empty()) throw std::invalid_argument("compute_distances: empty input");
  Matrix d(centers.size(), imgv.size());
  parallel_for(imgv.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = 0; i < centers.size(); ++i) {
      for (std::size_t k = b; k < e; ++k) d(i, k) = std::abs(imgv[k] - centers[i]) + kDistanceEpsilon;
    }
  });
  return d;
}

/// mu(i, k) = D(i, k)^p / sum_j D(j, k)^p with p = -2 / (expo - 1).
inline Matrix update_membership(const Matrix& dist, double expo) {
  if (!(expo > 1.0)) throw std::invalid_argument("update_membership: fuzziness must be > 1");
  const double p = -2.0 / (expo - 1.0);
  const std::size_t c = dist.rows();
  Matrix mu(c, dist.cols());
  parallel_for(dist.cols(), [&](std::size_t b, std::size_t e) {
    std::vector<double> tmp(c);
    for (std::size_t k = b; k < e; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < c; ++i) {
        tmp[i] = std::pow(dist(i, k), p);
        sum += tmp[i];
      }
      for (std::size_t i = 0; i < c; ++i) mu(i, k) = tmp[i] / sum;
    }
  });
  return mu;
}

/// Elementwise mu^expo.
inline Matrix membership_weights(const Matrix& mu, double expo) {
  Matrix mf(mu.rows(), mu.cols());
  parallel_for(mu.cols(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = 0; i < mu.rows(); ++i) {
      for (std::size_t k = b; k < e; ++k) mf(i, k) = std::pow(mu(i, k), expo);
    }
  });
  return mf;
}

/// centers[i] = sum_k mf(i, k) * imgv[k] / sum_k mf(i, k).
/// Each row is reduced sequentially so the result is independent of threading.
inline std::vector<double> update_centers(const Matrix& mf, std::span<const double> imgv) {
  if (mf.cols() != imgv.size()) throw std::invalid_argument("update_centers: shape mismatch");
  std::vector<double> centers(mf.rows());
  for (std::size_t i = 0; i < mf.rows(); ++i) {
    double num = 0.0;
    double den = 0.0;
    const auto w = mf.row(i);
    for (std::size_t k = 0; k < imgv.size(); ++k) {
      num += w[k] * imgv[k];
      den += w[k];
    }
    if (!(den > 0.0)) throw std::logic_error("update_centers: cluster " + std::to_string(i) + " has zero weight");
    centers[i] = num / den;
  }
  return centers;
}

/// J = sum_i sum_k D(i, k)^2 * mf(i, k).
inline double objective(const Matrix& dist, const Matrix& mf) {
  if (dist.rows() != mf.rows() || dist.cols() != mf.cols()) {
    throw std::invalid_argument("objective: shape mismatch");
  }
  double j = 0.0;
  for (std::size_t i = 0; i < dist.rows(); ++i) {
    const auto d = dist.row(i);
    const auto w = mf.row(i);
    for (std::size_t k = 0; k < d.size(); ++k) j += d[k] * d[k] * w[k];
  }
  return j;
}

/// State after one FCM iteration, handed to an optional observer.
struct FcmIterate {
  std::size_t iteration;  // 1-based
  const std::vector<double>& centers;
  const Matrix& membership;
  double objective;
};

using FcmObserver = std::function<void(const FcmIterate&)>;

/// Fuzzy C-Means on the flattened image. Centers start from the same even
/// spacing as K-Means. Each iteration computes distances, memberships,
/// weights, new centers and the objective (against the pre-update
/// distances), then exits when the objective changes by less than cfg.tol
/// or cfg.max_iter iterations have run.
inline FcmResult run_fcm(const GrayImage& img, const FcmConfig& cfg, const FcmObserver& observer = {}) {
  cfg.validate();
  const std::vector<double> imgv = flatten(img);

  FcmResult res;
  res.centers = init_centroids(cfg.ncluster, img.max_intensity());
  for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
    const Matrix dist = compute_distances(res.centers, imgv);
    res.membership = update_membership(dist, cfg.expo);
    const Matrix mf = membership_weights(res.membership, cfg.expo);
    res.centers = update_centers(mf, imgv);
    const double j = objective(dist, mf);
    res.objective_trace.push_back(j);
    res.iterations = iter;
    if (observer) observer(FcmIterate{iter, res.centers, res.membership, j});
    if (iter > 1 && std::abs(j - res.objective_trace[iter - 2]) < cfg.tol) {
      res.converged = true;
      res.exit = FcmExit::kTolerance;
      break;
    }
  }
  return res;
}

}  // namespace clusterseg
