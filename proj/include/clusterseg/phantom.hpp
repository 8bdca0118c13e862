#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "clusterseg/image.hpp"

namespace clusterseg {

struct PhantomRegion {
  double intensity;
  double fraction;
};

/// Synthetic test image: horizontal bands, one per region in listed order,
/// with optional additive Gaussian noise.
struct PhantomSpec {
  std::size_t width = 64;
  std::size_t height = 64;
  std::vector<PhantomRegion> regions;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (width == 0 || height == 0) throw std::invalid_argument("phantom: width and height must be positive");
    if (regions.empty()) throw std::invalid_argument("phantom: at least one region required");
    double total = 0.0;
    for (const auto& r : regions) {
      if (!(r.fraction > 0.0)) throw std::invalid_argument("phantom: area fractions must be positive");
      if (!(r.intensity >= 0.0 && r.intensity <= 255.0)) {
        throw std::invalid_argument("phantom: region intensity outside [0, 255]");
      }
      total += r.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("phantom: area fractions must sum to 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
      throw std::invalid_argument("phantom: noise sigma must be >= 0");
    }
  }
};

/// Name of the noise generator, recorded next to generated phantoms.
inline constexpr const char* kPhantomPrng = "mt19937_64+box-muller";

namespace detail {

// Box-Muller over raw mt19937_64 output. std::normal_distribution is not
// specified bit-for-bit across standard libraries, so it is avoided here to
// keep phantom bytes identical on every platform.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = unit();
    } while (u1 <= 0.0);
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace detail

/// Band boundaries: region j covers rows [round(H * F_{j-1}), round(H * F_j))
/// where F is the cumulative fraction; the last band ends at H.
inline std::vector<std::size_t> phantom_band_rows(const PhantomSpec& spec) {
  std::vector<std::size_t> ends;
  double cum = 0.0;
  for (std::size_t j = 0; j < spec.regions.size(); ++j) {
    cum += spec.regions[j].fraction;
    const bool last = j + 1 == spec.regions.size();
    ends.push_back(last ? spec.height
                        : std::min(spec.height, static_cast<std::size_t>(std::nearbyint(cum * static_cast<double>(spec.height)))));
  }
  return ends;
}

inline GrayImage make_phantom(const PhantomSpec& spec) {
  spec.validate();
  const auto ends = phantom_band_rows(spec);
  detail::GaussianStream noise(spec.seed);
  std::vector<double> px;
  px.reserve(spec.width * spec.height);
  std::size_t band = 0;
  for (std::size_t r = 0; r < spec.height; ++r) {
    while (band + 1 < ends.size() && r >= ends[band]) ++band;
    for (std::size_t c = 0; c < spec.width; ++c) {
      double v = spec.regions[band].intensity;
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise.next();
      px.push_back(std::nearbyint(std::clamp(v, 0.0, 255.0)));
    }
  }
  return GrayImage(spec.width, spec.height, std::move(px));
}

}  // namespace clusterseg
