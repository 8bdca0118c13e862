#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "clusterseg/kmeans.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace clusterseg {
namespace {

TEST(InitCentroids, EvenSpacing) {
  EXPECT_EQ(init_centroids(3, 255), (std::vector<double>{63.75, 127.5, 191.25}));
  EXPECT_EQ(init_centroids(1, 255), (std::vector<double>{127.5}));
  EXPECT_EQ(init_centroids(4, 200), (std::vector<double>{40, 80, 120, 160}));
}

TEST(InitCentroids, RejectsBadArguments) {
  EXPECT_THROW(init_centroids(0, 255), std::invalid_argument);
  EXPECT_THROW(init_centroids(2, 0), std::invalid_argument);
  EXPECT_THROW(init_centroids(2, -3), std::invalid_argument);
}

TEST(AssignBins, ExtremesAndTies) {
  const auto a = assign_bins(std::vector<double>{63.75, 127.5, 191.25});
  EXPECT_EQ(a[0], 0u);
  EXPECT_EQ(a[255], 2u);
  const auto t = assign_bins(std::vector<double>{100, 200});
  EXPECT_EQ(t[150], 0u);
  EXPECT_EQ(t[151], 1u);
}

TEST(AssignBins, MatchesExhaustiveMinScan) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 255);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(1 + rng() % 8);
    for (auto& x : c) x = u(rng);
    if (trial % 5 == 0) c.push_back(c.front());  // duplicated centroid forces ties
    const auto a = assign_bins(c);
    for (int v = 0; v < 256; ++v) {
      double best = 1e300;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double d = std::fabs(v - c[i]);
        if (d < best) {
          best = d;
          arg = i;
        }
      }
      ASSERT_EQ(a[v], arg);
    }
  }
}

TEST(UpdateCentroids, SingleBinAndSymmetricMean) {
  Histogram h;
  h.counts[10] = 5;
  BinAssignment a{};
  a.fill(1);
  a[10] = 0;
  auto c = update_centroids(a, h, std::vector<double>{3, 77});
  EXPECT_EQ(c[0], 10.0);
  EXPECT_EQ(c[1], 77.0);  // no pixels: carried over

  Histogram h2;
  h2.counts[0] = 1;
  h2.counts[255] = 1;
  BinAssignment all0{};
  EXPECT_EQ(update_centroids(all0, h2, std::vector<double>{1})[0], 127.5);
}

TEST(UpdateCentroids, MatchesNaiveWeightedMean) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 1 + rng() % 6;
    Histogram h;
    BinAssignment a{};
    for (std::size_t v = 0; v < 256; ++v) {
      h.counts[v] = rng() % 4 == 0 ? 0 : rng() % 50;
      a[v] = rng() % k;
    }
    std::vector<double> old(k, 42.0);
    const auto c = update_centroids(a, h, old);
    for (std::size_t i = 0; i < k; ++i) {
      double num = 0, den = 0;
      for (std::size_t v = 0; v < 256; ++v) {
        if (a[v] == i) {
          num += v * static_cast<double>(h.counts[v]);
          den += static_cast<double>(h.counts[v]);
        }
      }
      const double expect = den > 0 ? num / den : 42.0;
      ASSERT_NEAR(c[i], expect, 1e-12 * std::max(1.0, expect));
    }
  }
}

TEST(RunKMeans, TwoValuePhantom) {
  const GrayImage img = testing::two_band(64, 64, 60, 180);
  const KMeansResult r = run_kmeans(img, {2, 100});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.centroids, (std::vector<double>{60, 180}));
}

TEST(RunKMeans, ConstantImageOneCluster) {
  const KMeansResult r = run_kmeans(GrayImage(8, 8, 100.0), {1, 100});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.centroids, (std::vector<double>{100}));
}

TEST(RunKMeans, SingleIntensityWithSeveralClustersCarriesEmptyOnes) {
  const KMeansResult r = run_kmeans(GrayImage(4, 4, 90.0), {3, 100});
  EXPECT_TRUE(r.converged);
  // Seeds 22.5, 45, 67.5; only the last owns pixels.
  EXPECT_EQ(r.centroids, (std::vector<double>{22.5, 45, 90}));
}

TEST(RunKMeans, AllBlackImageIsRejected) {
  EXPECT_THROW(run_kmeans(GrayImage(4, 4, 0.0), {2, 100}), std::invalid_argument);
}

TEST(RunKMeans, ConfigValidation) {
  const GrayImage img(2, 2, 10.0);
  EXPECT_THROW(run_kmeans(img, {0, 10}), std::invalid_argument);
  EXPECT_THROW(run_kmeans(img, {257, 10}), std::invalid_argument);
  EXPECT_THROW(run_kmeans(img, {2, 0}), std::invalid_argument);
}

TEST(RunKMeans, MatchesPerPixelLloyd) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage img = testing::random_image(rng, 32, 32);
    const std::size_t k = 1 + trial % 5;
    const KMeansResult r = run_kmeans(img, {k, 100});
    const auto ref = oracle::pixel_lloyd(flatten(img), k, 100);
    ASSERT_EQ(r.centroid_trace.size(), ref.size());
    for (std::size_t it = 0; it < ref.size(); ++it) {
      for (std::size_t i = 0; i < k; ++i) ASSERT_NEAR(r.centroid_trace[it][i], ref[it][i], 1e-9);
    }
  }
}

TEST(RunKMeans, Invariants) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = testing::random_image(rng, 1 + rng() % 40, 1 + rng() % 40, rng() % 100, 155 + rng() % 101);
    const std::size_t k = 1 + rng() % 8;
    const KMeansResult r = run_kmeans(img, {k, 100});
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 100u);
    for (const auto& cs : r.centroid_trace) {
      for (double c : cs) {
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 255.0);
      }
    }
    EXPECT_EQ(r.bin_assignments, assign_bins(r.centroids));
    const KMeansResult again = run_kmeans(img, {k, 100});
    EXPECT_EQ(again.centroid_trace, r.centroid_trace);
  }
}

TEST(RunKMeans, IterationCapReportsNotConverged) {
  std::mt19937_64 rng(4);
  const GrayImage img = testing::random_image(rng, 32, 32);
  const KMeansResult full = run_kmeans(img, {4, 100});
  ASSERT_GT(full.iterations, 1u);
  const KMeansResult capped = run_kmeans(img, {4, 1});
  EXPECT_EQ(capped.iterations, 1u);
  EXPECT_FALSE(capped.converged);
}

}  // namespace
}  // namespace clusterseg
