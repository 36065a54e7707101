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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nanodetect/regionprops.hpp"

namespace nanodetect {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Hand-labeled (or generator-provided) particle centers.
struct GroundTruth {
  std::vector<Point> points;
  std::string source;
};

struct MatchPair {
  int gt_index = 0;
  int detection_index = 0;
  double distance = 0.0;
};

struct MatchReport {
  std::vector<MatchPair> pairs;  // in the order they were accepted
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_detections;
  double recall = 1.0;     // |pairs| / |gt|, 1 when gt is empty
  double precision = 1.0;  // |pairs| / |detections|, 1 when none detected
  double radius = 0.0;
  std::size_t gt_count = 0;
  std::size_t detection_count = 0;
};

/// Greedy closest-first one-to-one matching of particle centroids to
/// ground-truth points within `radius`. Equal distances resolve by
/// (gt_index, detection_index). Not always maximum-cardinality.
MatchReport match(const GroundTruth& gt, std::span<const Point> detections,
                  double radius);
MatchReport match(const GroundTruth& gt, const std::vector<Particle>& detections,
                  double radius);

std::vector<Point> centroids(const std::vector<Particle>& particles);

/// Human-readable summary; recall/precision printed with six decimals.
std::string format_report(const MatchReport& report);

/// "kind,gt_index,detection_index,distance" rows for pairs and unmatched.
void write_match_csv(const MatchReport& report, const std::filesystem::path& path);

/// Pearson product-moment correlation, clamped to [-1, 1]. One constant input
/// gives 0. Throws on length mismatch, n < 2 (kTooFewSamples) or when both
/// inputs are constant (kZeroVariance).
double pearson(std::span<const double> xs, std::span<const double> ys);

struct IntensitySizeReport {
  double r = 0.0;
  std::string pairs_csv;  // "mean_intensity,area" plus one row per particle
};

/// Correlation of mean intensity with area. Requires >= 2 particles and
/// variation in both columns (kZeroVariance otherwise).
IntensitySizeReport intensity_size_report(const std::vector<Particle>& particles);

/// CSV with header "x,y"; errors report the line number.
GroundTruth read_ground_truth(std::istream& in);
GroundTruth load_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& path);

}  // namespace nanodetect
