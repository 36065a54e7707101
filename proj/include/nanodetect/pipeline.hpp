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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nanodetect/labeling.hpp"
#include "nanodetect/morphology.hpp"
#include "nanodetect/raster.hpp"
#include "nanodetect/regionprops.hpp"

namespace nanodetect {

enum class ThresholdMode { kOtsuPerIteration, kFixedSequence };
enum class Separation { kMorphological, kWatershed };

/// Tunables of the recursive detection loop.
struct DetectConfig {
  int max_iterations = 3;
  /// Erosion count per iteration; must be non-increasing. Zero skips.
  std::vector<int> erode_schedule{2, 1, 1};
  /// Dilation count per iteration. Unset means "same as erode_schedule".
  std::optional<std::vector<int>> dilate_schedule;
  Connectivity connectivity = Connectivity::kEight;
  std::int64_t min_area = 4;
  StructuringElement se = StructuringElement::square3();
  ThresholdMode threshold_mode = ThresholdMode::kOtsuPerIteration;
  /// Used when threshold_mode is kFixedSequence, one per iteration.
  std::vector<int> fixed_thresholds;
  /// Stop once a threshold would be at or below this intensity.
  int threshold_floor = 8;
  /// Otsu splits whose class means differ by less than this many levels are
  /// treated as noise: Otsu is re-run on the upper class until the split is
  /// wide enough, and the loop stops when none is. 0 disables. Otsu mode only.
  int min_contrast = 20;
  Separation separation = Separation::kMorphological;
  /// Marker height for watershed separation.
  double min_distance = 3.0;
  /// Discard particles whose pixels touch the frame.
  bool drop_border = false;
  /// Mask the whole thresholded blob behind each detection rather than only
  /// the cleaned detection, so its unopened rim is not found again later.
  bool mask_footprint = true;

  /// The dilation schedule actually applied.
  const std::vector<int>& effective_dilate_schedule() const {
    return dilate_schedule ? *dilate_schedule : erode_schedule;
  }

  /// Throws Error(kConfig) naming the offending field.
  void validate() const;
};

enum class StopReason {
  kMaxIterations,
  kNoDetections,
  kThresholdNotDecreasing,
  kThresholdFloor,
  kLowContrast,
};

const char* to_string(StopReason r);

struct DetectResult {
  /// All iterations merged, labels renumbered 1..N in detection order.
  std::vector<Particle> particles;
  std::vector<int> per_iteration_counts;
  std::vector<int> thresholds_used;
  /// Working image after the last mask-out.
  GrayImage final_masked_image;
  /// Per-iteration detections, using the merged particle labels.
  std::vector<LabelMap> iteration_labels;
  StopReason stop_reason = StopReason::kMaxIterations;

  int iterations_run() const {
    return static_cast<int>(per_iteration_counts.size());
  }
};

/// Recursive detection: threshold, erode, dilate, label, filter, measure
/// against the original image, then mask the detections with the working
/// image's rounded mean and repeat on the masked copy.
DetectResult detect(const GrayImage& img, const DetectConfig& cfg);

/// Pixels under any nonzero label become `fill` (clamped to [0, 255]).
GrayImage mask_out(const GrayImage& img, const LabelMap& lm, int fill);

/// `detections` plus every component of `thresholded` that overlaps one.
LabelMap threshold_footprint(const BinaryMask& thresholded, const LabelMap& detections,
                             Connectivity conn);

/// Mean intensity rounded half-up.
int rounded_mean(const GrayImage& img);

/// Threshold + erode + dilate + label + filter for one iteration, without
/// measurement. `iteration` is 1-based and indexes the schedules.
LabelMap segment_iteration(const GrayImage& working, int threshold,
                           const DetectConfig& cfg, int iteration);

/// Watershed split of a cleaned mask; components without a marker keep
/// their connected-component label.
LabelMap watershed_separate(const BinaryMask& mask, Connectivity conn,
                            double min_distance);

// ---------------------------------------------------------------------------
// Batch processing over a directory of PGM files.

inline constexpr const char* kSummaryCsvHeader = "file,particles,iterations,thresholds";

struct BatchEntry {
  std::string file;  // file name relative to the input directory
  bool ok = false;
  std::string message;  // error text when !ok
  std::size_t particles = 0;
  int iterations = 0;
  std::vector<int> thresholds;
};

struct BatchReport {
  std::vector<BatchEntry> entries;  // lexicographic filename order

  std::size_t processed() const;
  std::size_t skipped() const;
};

/// Lists "*.pgm" files (case-insensitive extension) in lexicographic order.
std::vector<std::filesystem::path> list_pgm_files(const std::filesystem::path& dir);

/// Output name for an input image: "<stem>.particles.csv".
std::string particles_csv_name(const std::filesystem::path& image);

/// Runs detect on every PGM in `dir`, writing one particle CSV per image and
/// "summary.csv" into `out_dir`. Unreadable images are reported and skipped.
/// Output does not depend on `workers`. Throws kIo if `dir` is missing.
BatchReport detect_batch(const std::filesystem::path& dir,
                         const DetectConfig& cfg,
                         const std::filesystem::path& out_dir, int workers = 1);

/// Runs detect on one file and writes its particle CSV into `out_dir`.
BatchEntry detect_file(const std::filesystem::path& image,
                       const DetectConfig& cfg,
                       const std::filesystem::path& out_dir);

/// Single-image counterpart of detect_batch: one entry, same output files.
BatchReport detect_single(const std::filesystem::path& image,
                          const DetectConfig& cfg,
                          const std::filesystem::path& out_dir);

void write_summary_csv(const BatchReport& report,
                       const std::filesystem::path& path);

}  // namespace nanodetect
