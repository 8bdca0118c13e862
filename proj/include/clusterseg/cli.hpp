#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clusterseg/fcm.hpp"
#include "clusterseg/formats.hpp"
#include "clusterseg/image.hpp"
#include "clusterseg/kmeans.hpp"
#include "clusterseg/pgm.hpp"
#include "clusterseg/phantom.hpp"
#include "clusterseg/segment.hpp"

namespace clusterseg::cli {

enum class Algo { kKMeans, kFcm };

inline const char* algo_name(Algo a) { return a == Algo::kKMeans ? "kmeans" : "fcm"; }

struct SegmentParams {
  Algo algo = Algo::kKMeans;
  std::size_t clusters = 2;
  std::optional<std::size_t> max_iter;  // per-algorithm default when unset
  double fuzziness = 2.0;
  double tol = 1e-5;
  bool dump_iterations = false;
};

/// Outcome of one clustering run plus everything written for it.
struct Segmentation {
  LabelMask mask;
  std::vector<double> centers;
  nlohmann::json stats;
};

inline constexpr std::size_t kKMeansDefaultMaxIter = 100;
inline constexpr std::size_t kFcmDefaultMaxIter = 3;

inline nlohmann::json per_cluster_stats(const GrayImage& img, const LabelMask& mask) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < mask.clusters(); ++i) {
    const bool occupied = std::find(mask.labels().begin(), mask.labels().end(), i) != mask.labels().end();
    nlohmann::json j;
    if (occupied) {
      j = to_json(region_stats(img, mask, i));
    } else {
      j = {{"mean", nullptr}, {"std", nullptr}, {"cv", nullptr}, {"count", 0}};
    }
    j["cluster"] = i;
    arr.push_back(std::move(j));
  }
  return arr;
}

/// Runs the selected algorithm and writes <prefix>.mask.pgm,
/// <prefix>.labels.txt, <prefix>.c<i>.pgm and <prefix>.stats.json.
inline Segmentation segment_to_files(const GrayImage& img, const SegmentParams& p, const std::string& prefix) {
  Segmentation seg;
  nlohmann::json doc;
  doc["algo"] = algo_name(p.algo);
  doc["clusters"] = p.clusters;

  if (p.algo == Algo::kKMeans) {
    KMeansConfig cfg{p.clusters, p.max_iter.value_or(kKMeansDefaultMaxIter)};
    const KMeansResult res = run_kmeans(img, cfg);
    seg.centers = res.centroids;
    seg.mask = mask_from_centroids(img, res.centroids);
    doc["params"] = {{"max_iter", cfg.max_iter}};
    doc["centroids"] = res.centroids;
    doc["iterations"] = res.iterations;
    doc["converged"] = res.converged;
    if (p.dump_iterations) {
      for (std::size_t r = 1; r < res.centroid_trace.size(); ++r) {
        save_image(mask_to_image(mask_from_centroids(img, res.centroid_trace[r])),
                   prefix + ".iter" + std::to_string(r) + ".mask.pgm");
      }
    }
  } else {
    FcmConfig cfg;
    cfg.ncluster = p.clusters;
    cfg.expo = p.fuzziness;
    cfg.max_iter = p.max_iter.value_or(kFcmDefaultMaxIter);
    cfg.tol = p.tol;
    FcmObserver dump;
    if (p.dump_iterations) {
      dump = [&](const FcmIterate& it) {
        save_image(mask_to_image(mask_from_membership(it.membership, img.width(), img.height())),
                   prefix + ".iter" + std::to_string(it.iteration) + ".mask.pgm");
      };
    }
    const FcmResult res = run_fcm(img, cfg, dump);
    seg.centers = res.centers;
    seg.mask = mask_from_membership(res.membership, img.width(), img.height());
    doc["params"] = {{"fuzziness", cfg.expo}, {"max_iter", cfg.max_iter}, {"tol", cfg.tol}, {"dist_eps", kDistanceEpsilon}};
    doc["centers"] = res.centers;
    doc["iterations"] = res.iterations;
    doc["converged"] = res.converged;
    doc["exit"] = to_string(res.exit);
    doc["objective_trace"] = res.objective_trace;
  }

  doc["per_cluster"] = per_cluster_stats(img, seg.mask);
  doc["overall"] = to_json(region_stats(img, seg.mask));

  save_image(mask_to_image(seg.mask), prefix + ".mask.pgm");
  save_labels(seg.mask, prefix + ".labels.txt");
  for (std::size_t i = 0; i < seg.mask.clusters(); ++i) {
    save_image(apply_mask(img, seg.mask, i), prefix + ".c" + std::to_string(i) + ".pgm");
  }
  write_text_file(prefix + ".stats.json", doc.dump(2) + "\n");
  seg.stats = std::move(doc);
  return seg;
}

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(10);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

inline void add_fcm_flags(CLI::App* cmd, SegmentParams& p) {
  cmd->add_option("--fuzziness", p.fuzziness, "FCM fuzziness factor (> 1)")->capture_default_str();
  cmd->add_option("--tol", p.tol, "FCM objective-delta exit threshold (> 0)")->capture_default_str();
}

inline PhantomRegion parse_region(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--region", "expected <intensity>:<fraction>");
  try {
    std::size_t used = 0;
    const double v = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string frac = text.substr(colon + 1);
    const double f = std::stod(frac, &used);
    if (used != frac.size()) throw std::invalid_argument(text);
    return {v, f};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--region", "expected <intensity>:<fraction>, got " + text);
  }
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Histogram K-Means and Fuzzy C-Means segmentation of 8-bit grayscale images", "clusterseg"};
  app.require_subcommand(1);

  // segment
  SegmentParams seg_params;
  std::string seg_algo;
  std::string seg_input;
  std::string seg_prefix;
  std::size_t seg_max_iter = 0;
  auto* segment = app.add_subcommand("segment", "Cluster an image and write masks, segmented images and stats");
  segment->add_option("--algo", seg_algo, "kmeans or fcm")->required()->check(CLI::IsMember({"kmeans", "fcm"}));
  segment->add_option("--input", seg_input, "Input PGM (P2/P5)")->required();
  segment->add_option("--clusters", seg_params.clusters, "Number of clusters")->required();
  segment->add_option("--out-prefix", seg_prefix, "Output path prefix")->required();
  auto* seg_iter_opt = segment->add_option("--max-iter", seg_max_iter, "Iteration cap (kmeans 100, fcm 3)");
  detail::add_fcm_flags(segment, seg_params);
  segment->add_flag("--dump-iterations", seg_params.dump_iterations, "Write a mask image per iteration");

  // stats
  std::string st_input;
  std::string st_mask;
  std::optional<std::size_t> st_cluster;
  std::string st_format = "json";
  auto* stats = app.add_subcommand("stats", "Region statistics of an image under a label mask");
  stats->add_option("--input", st_input, "Input PGM")->required();
  stats->add_option("--mask", st_mask, "Labels file written by segment")->required();
  stats->add_option("--cluster", st_cluster, "Restrict to one cluster (default: all pixels)");
  stats->add_option("--format", st_format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  // compare
  SegmentParams cmp_params;
  std::string cmp_input;
  std::string cmp_prefix;
  std::size_t cmp_fcm_iter = kFcmDefaultMaxIter;
  std::size_t cmp_km_iter = kKMeansDefaultMaxIter;
  std::optional<std::size_t> cmp_cluster;
  auto* compare = app.add_subcommand("compare", "Run K-Means and FCM and tabulate region statistics");
  compare->add_option("--input", cmp_input, "Input PGM")->required();
  compare->add_option("--clusters", cmp_params.clusters, "Number of clusters")->required();
  compare->add_option("--out-prefix", cmp_prefix, "Output path prefix")->required();
  compare->add_option("--cluster", cmp_cluster, "Cluster compared (default: brightest center)");
  compare->add_option("--max-iter", cmp_fcm_iter, "FCM iteration cap")->capture_default_str();
  compare->add_option("--kmeans-max-iter", cmp_km_iter, "K-Means iteration cap")->capture_default_str();
  detail::add_fcm_flags(compare, cmp_params);

  // phantom
  PhantomSpec ph;
  std::vector<std::string> ph_regions;
  std::string ph_output;
  auto* phantom = app.add_subcommand("phantom", "Write a banded synthetic test image");
  phantom->add_option("--width", ph.width, "Width in pixels")->capture_default_str();
  phantom->add_option("--height", ph.height, "Height in pixels")->capture_default_str();
  phantom->add_option("--region", ph_regions, "Band as <intensity>:<fraction>, top to bottom")->required();
  phantom->add_option("--noise-sigma", ph.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  phantom->add_option("--seed", ph.seed, "Noise seed")->capture_default_str();
  phantom->add_option("--output", ph_output, "Output PGM")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (segment->parsed()) {
      seg_params.algo = seg_algo == "kmeans" ? Algo::kKMeans : Algo::kFcm;
      if (seg_iter_opt->count() > 0) seg_params.max_iter = seg_max_iter;
      const GrayImage img = load_image(seg_input);
      const Segmentation s = segment_to_files(img, seg_params, seg_prefix);
      out << "algo: " << algo_name(seg_params.algo) << "\n";
      out << (seg_params.algo == Algo::kKMeans ? "centroids: " : "centers: ") << detail::join(s.centers) << "\n";
      out << "iterations: " << s.stats["iterations"].get<std::size_t>() << "\n";
      out << "converged: " << (s.stats["converged"].get<bool>() ? "true" : "false") << "\n";
      if (s.stats.contains("exit")) out << "exit: " << s.stats["exit"].get<std::string>() << "\n";
      return 0;
    }

    if (stats->parsed()) {
      const GrayImage img = load_image(st_input);
      const LabelMask mask = load_labels(st_mask);
      if (mask.width() != img.width() || mask.height() != img.height()) {
        throw std::invalid_argument("mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                                    " but image is " + std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()));
      }
      const RegionStats rs = region_stats(img, mask, st_cluster);
      if (st_format == "csv") {
        out << csv_header() << "\n" << to_csv_row(rs) << "\n";
      } else {
        out << to_json(rs).dump() << "\n";
      }
      return 0;
    }

    if (compare->parsed()) {
      const GrayImage img = load_image(cmp_input);
      SegmentParams km = cmp_params;
      km.algo = Algo::kKMeans;
      km.max_iter = cmp_km_iter;
      SegmentParams fc = cmp_params;
      fc.algo = Algo::kFcm;
      fc.max_iter = cmp_fcm_iter;
      const Segmentation a = segment_to_files(img, km, cmp_prefix + ".kmeans");
      const Segmentation b = segment_to_files(img, fc, cmp_prefix + ".fcm");
      auto pick = [&](const Segmentation& s) {
        const std::size_t c = cmp_cluster.value_or(static_cast<std::size_t>(
            std::max_element(s.centers.begin(), s.centers.end()) - s.centers.begin()));
        return region_stats(img, s.mask, c);
      };
      const std::string table = compare_report(pick(a), pick(b), "K-Means", "FCM");
      write_text_file(cmp_prefix + ".compare.txt", table);
      out << table;
      return 0;
    }

    if (phantom->parsed()) {
      for (const auto& r : ph_regions) ph.regions.push_back(detail::parse_region(r));
      const GrayImage img = make_phantom(ph);
      save_image(img, ph_output);
      nlohmann::json meta;
      meta["width"] = ph.width;
      meta["height"] = ph.height;
      meta["regions"] = nlohmann::json::array();
      for (const auto& r : ph.regions) meta["regions"].push_back({{"intensity", r.intensity}, {"fraction", r.fraction}});
      meta["noise_sigma"] = ph.noise_sigma;
      meta["seed"] = ph.seed;
      meta["prng"] = kPhantomPrng;
      write_text_file(ph_output + ".meta.json", meta.dump(2) + "\n");
      return 0;
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace clusterseg::cli
