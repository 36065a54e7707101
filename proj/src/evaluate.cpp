// Copyright 2026 The nanodetect Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nanodetect/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "text_util.hpp"

namespace nanodetect {

std::vector<Point> centroids(const std::vector<Particle>& particles) {
  std::vector<Point> out;
  out.reserve(particles.size());
  for (const auto& p : particles) out.push_back({p.centroid_x, p.centroid_y});
  return out;
}

MatchReport match(const GroundTruth& gt, std::span<const Point> detections,
                  double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "match radius must be > 0");
  }
  struct Candidate {
    double d2;
    int g, d;
  };
  const double r2 = radius * radius;
  std::vector<Candidate> candidates;
  for (int g = 0; g < static_cast<int>(gt.points.size()); ++g) {
    for (int d = 0; d < static_cast<int>(detections.size()); ++d) {
      const double dx = gt.points[g].x - detections[d].x;
      const double dy = gt.points[g].y - detections[d].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= r2) candidates.push_back({d2, g, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.d2 != b.d2) return a.d2 < b.d2;
              if (a.g != b.g) return a.g < b.g;
              return a.d < b.d;
            });

  MatchReport report;
  report.radius = radius;
  report.gt_count = gt.points.size();
  report.detection_count = detections.size();
  std::vector<bool> gt_used(gt.points.size()), det_used(detections.size());
  for (const auto& c : candidates) {
    if (gt_used[c.g] || det_used[c.d]) continue;
    gt_used[c.g] = det_used[c.d] = true;
    report.pairs.push_back({c.g, c.d, std::sqrt(c.d2)});
  }
  for (int g = 0; g < static_cast<int>(gt_used.size()); ++g) {
    if (!gt_used[g]) report.unmatched_gt.push_back(g);
  }
  for (int d = 0; d < static_cast<int>(det_used.size()); ++d) {
    if (!det_used[d]) report.unmatched_detections.push_back(d);
  }
  const double matched = static_cast<double>(report.pairs.size());
  report.recall = gt.points.empty() ? 1.0 : matched / gt.points.size();
  report.precision = detections.empty() ? 1.0 : matched / detections.size();
  return report;
}

MatchReport match(const GroundTruth& gt, const std::vector<Particle>& detections,
                  double radius) {
  const auto pts = centroids(detections);
  return match(gt, std::span<const Point>(pts), radius);
}

std::string format_report(const MatchReport& r) {
  using detail::format_fixed6;
  std::ostringstream out;
  out << "recall=" << format_fixed6(r.recall) << '\n'
      << "precision=" << format_fixed6(r.precision) << '\n'
      << "radius=" << format_fixed6(r.radius) << '\n'
      << "ground_truth=" << r.gt_count << '\n'
      << "detections=" << r.detection_count << '\n'
      << "matched=" << r.pairs.size() << '\n'
      << "unmatched_ground_truth=" << r.unmatched_gt.size() << '\n'
      << "unmatched_detections=" << r.unmatched_detections.size() << '\n';
  if (r.gt_count == 0) {
    out << "warning: ground truth is empty; recall is vacuously 1\n";
  }
  if (r.detection_count == 0) {
    out << "warning: no detections; precision is vacuously 1\n";
  }
  return out.str();
}

void write_match_csv(const MatchReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "kind,gt_index,detection_index,distance\n";
  for (const auto& p : r.pairs) {
    out << "pair," << p.gt_index << ',' << p.detection_index << ','
        << detail::format_fixed6(p.distance) << '\n';
  }
  for (int g : r.unmatched_gt) out << "unmatched_gt," << g << ",,\n";
  for (int d : r.unmatched_detections) out << "unmatched_detection,," << d << ",\n";
  if (!out) throw Error(ErrorCode::kIo, "write error on " + path.string());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kInvalidArgument, "pearson: length mismatch");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples, "pearson: need at least 2 samples");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 && syy == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "pearson: both inputs are constant");
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

IntensitySizeReport intensity_size_report(const std::vector<Particle>& particles) {
  if (particles.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "intensity/size correlation needs at least 2 particles");
  }
  std::vector<double> intensity, area;
  std::ostringstream csv;
  csv << "mean_intensity,area\n";
  for (const auto& p : particles) {
    intensity.push_back(p.mean_intensity);
    area.push_back(static_cast<double>(p.area));
    csv << detail::format_fixed6(p.mean_intensity) << ',' << p.area << '\n';
  }
  auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(intensity)) {
    throw Error(ErrorCode::kZeroVariance, "zero variance: all mean intensities are equal");
  }
  if (constant(area)) {
    throw Error(ErrorCode::kZeroVariance, "zero variance: all areas are equal");
  }
  return {pearson(intensity, area), csv.str()};
}

GroundTruth read_ground_truth(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "x,y") {
    throw Error(ErrorCode::kFormat, "line 1: expected ground-truth header 'x,y'");
  }
  GroundTruth gt;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto cols = detail::split(text, ',');
    const auto x = cols.size() == 2 ? detail::parse_number<double>(cols[0]) : std::nullopt;
    const auto y = cols.size() == 2 ? detail::parse_number<double>(cols[1]) : std::nullopt;
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
      throw Error(ErrorCode::kFormat,
                  "line " + std::to_string(line_no) + ": expected two finite numbers 'x,y'");
    }
    gt.points.push_back({*x, *y});
  }
  return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    GroundTruth gt = read_ground_truth(in);
    gt.source = path.string();
    return gt;
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "x,y\n";
  char buf[64];
  for (const auto& p : gt.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::kIo, "write error on " + path.string());
}

}  // namespace nanodetect
