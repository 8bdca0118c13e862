#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "clusterseg/segment.hpp"

namespace clusterseg {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labels sidecar: "W H k" followed by W*H whitespace-separated labels,
// written one image row per line.

inline std::string encode_labels(const LabelMask& mask) {
  std::ostringstream out;
  out << mask.width() << ' ' << mask.height() << ' ' << mask.clusters() << '\n';
  for (std::size_t r = 0; r < mask.height(); ++r) {
    for (std::size_t c = 0; c < mask.width(); ++c) {
      if (c) out << ' ';
      out << mask.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

inline LabelMask decode_labels(const std::string& text) {
  std::istringstream in(text);
  long long w = 0, h = 0, k = 0;
  if (!(in >> w >> h >> k) || w <= 0 || h <= 0 || k <= 0) {
    throw FormatError("labels: malformed header, expected \"W H k\"");
  }
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<std::size_t> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    long long l = 0;
    if (!(in >> l)) throw FormatError("labels: expected " + std::to_string(n) + " labels");
    if (l < 0 || l >= k) throw FormatError("labels: label " + std::to_string(l) + " outside [0, k)");
    labels.push_back(static_cast<std::size_t>(l));
  }
  std::string extra;
  if (in >> extra) throw FormatError("labels: trailing data after " + std::to_string(n) + " labels");
  return LabelMask(static_cast<std::size_t>(w), static_cast<std::size_t>(h), static_cast<std::size_t>(k),
                   std::move(labels));
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

inline LabelMask load_labels(const std::filesystem::path& path) { return decode_labels(read_text_file(path)); }

inline void save_labels(const LabelMask& mask, const std::filesystem::path& path) {
  write_text_file(path, encode_labels(mask));
}

inline nlohmann::json to_json(const RegionStats& s) {
  nlohmann::json j;
  j["mean"] = s.mean;
  j["std"] = s.stddev;
  j["cv"] = s.cv ? nlohmann::json(*s.cv) : nlohmann::json(nullptr);
  j["count"] = s.count;
  return j;
}

inline RegionStats region_stats_from_json(const nlohmann::json& j) {
  RegionStats s;
  s.mean = j.at("mean").get<double>();
  s.stddev = j.at("std").get<double>();
  if (!j.at("cv").is_null()) s.cv = j.at("cv").get<double>();
  s.count = j.at("count").get<std::size_t>();
  return s;
}

inline std::string csv_header() { return "mean,std,cv,count"; }

inline std::string to_csv_row(const RegionStats& s) {
  // %.17g keeps doubles round-trippable.
  char buf[128];
  std::string cv;
  if (s.cv) {
    std::snprintf(buf, sizeof buf, "%.17g", *s.cv);
    cv = buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,", s.mean, s.stddev);
  return std::string(buf) + cv + "," + std::to_string(s.count);
}

}  // namespace clusterseg
