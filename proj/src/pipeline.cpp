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

#include "nanodetect/pipeline.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "nanodetect/threshold.hpp"
#include "nanodetect/watershed.hpp"

namespace nanodetect {

namespace {

Error config_error(const std::string& key, const std::string& why) {
  return Error(ErrorCode::kConfig, "config key '" + key + "': " + why);
}

// Difference of class means for the split at t over intensities >= lo, or
// -1 when a class is empty.
double class_contrast(const Histogram256& hist, int lo, int t) {
  std::uint64_t n0 = 0, s0 = 0, n1 = 0, s1 = 0;
  for (int v = lo; v < 256; ++v) {
    const std::uint64_t c = hist.bins[v];
    if (v <= t) {
      n0 += c;
      s0 += c * v;
    } else {
      n1 += c;
      s1 += c * v;
    }
  }
  if (n0 == 0 || n1 == 0) return -1.0;
  return static_cast<double>(s1) / n1 - static_cast<double>(s0) / n0;
}

// Otsu, then while the split only separates noise (class means closer than
// min_contrast) Otsu again on the upper class alone. A degenerate first
// split is returned as is; nullopt once the upper class runs dry.
std::optional<int> contrast_otsu(const Histogram256& hist, int min_contrast) {
  int t = otsu(hist).t;
  if (min_contrast <= 0 || class_contrast(hist, 0, t) < 0.0) return t;
  int lo = 0;
  while (true) {
    const double c = class_contrast(hist, lo, t);
    if (c < 0.0) return std::nullopt;
    if (c >= min_contrast) return t;
    Histogram256 upper;
    for (int v = t + 1; v < 256; ++v) {
      upper.bins[v] = hist.bins[v];
      upper.total += hist.bins[v];
    }
    if (upper.total == 0) return std::nullopt;
    lo = t + 1;
    t = otsu(upper).t;
  }
}

LabelMap drop_border_components(const LabelMap& lm) {
  std::vector<bool> touches(lm.count() + 1, false);
  const int w = lm.width(), h = lm.height();
  for (int x = 0; x < w; ++x) {
    touches[lm(x, 0)] = true;
    touches[lm(x, h - 1)] = true;
  }
  for (int y = 0; y < h; ++y) {
    touches[lm(0, y)] = true;
    touches[lm(w - 1, y)] = true;
  }
  LabelMap out = lm;
  for (auto& v : out.pixels()) {
    if (v != 0 && touches[v]) v = 0;
  }
  return relabel_raster_order(out);
}

}  // namespace

void DetectConfig::validate() const {
  if (max_iterations < 1) throw config_error("max_iterations", "must be >= 1");
  if (static_cast<int>(erode_schedule.size()) < max_iterations) {
    throw config_error("erode_schedule", "shorter than max_iterations");
  }
  const auto& dil = effective_dilate_schedule();
  if (static_cast<int>(dil.size()) < max_iterations) {
    throw config_error("dilate_schedule", "shorter than max_iterations");
  }
  for (std::size_t i = 0; i < erode_schedule.size(); ++i) {
    if (erode_schedule[i] < 0) throw config_error("erode_schedule", "negative count");
    if (i > 0 && erode_schedule[i] > erode_schedule[i - 1]) {
      throw config_error("erode_schedule", "must be non-increasing");
    }
  }
  for (int d : dil) {
    if (d < 0) throw config_error("dilate_schedule", "negative count");
  }
  if (min_area < 0) throw config_error("min_area", "must be >= 0");
  if (threshold_floor < 0 || threshold_floor > 255) {
    throw config_error("threshold_floor", "must be in [0, 255]");
  }
  if (min_contrast < 0 || min_contrast > 255) {
    throw config_error("min_contrast", "must be in [0, 255]");
  }
  if (threshold_mode == ThresholdMode::kFixedSequence) {
    if (static_cast<int>(fixed_thresholds.size()) < max_iterations) {
      throw config_error("fixed_thresholds", "shorter than max_iterations");
    }
    for (int t : fixed_thresholds) {
      if (t < 0 || t > 255) throw config_error("fixed_thresholds", "value outside [0, 255]");
    }
  }
  if (separation == Separation::kWatershed && !(min_distance >= 1.0)) {
    throw config_error("min_distance", "must be >= 1");
  }
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kNoDetections: return "no_detections";
    case StopReason::kThresholdNotDecreasing: return "threshold_not_decreasing";
    case StopReason::kThresholdFloor: return "threshold_floor";
    case StopReason::kLowContrast: return "low_contrast";
  }
  return "unknown";
}

GrayImage mask_out(const GrayImage& img, const LabelMap& lm, int fill) {
  if (!same_shape(img, lm)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask_out: image and label map differ in size");
  }
  const auto value = static_cast<std::uint8_t>(std::clamp(fill, 0, 255));
  GrayImage out = img;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (lm[i] != 0) out[i] = value;
  }
  return out;
}

LabelMap threshold_footprint(const BinaryMask& thresholded, const LabelMap& detections,
                             Connectivity conn) {
  if (!same_shape(thresholded, detections)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "threshold_footprint: mask and label map differ in size");
  }
  const LabelMap blobs = label_components(thresholded, conn);
  std::vector<bool> hit(blobs.count() + 1, false);
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    if (detections[i] != 0) hit[blobs[i]] = true;
  }
  LabelMap out = detections;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == 0 && blobs[i] != 0 && hit[blobs[i]]) out[i] = 1;
  }
  return out;
}

int rounded_mean(const GrayImage& img) {
  if (img.empty()) return 0;
  std::uint64_t sum = 0;
  for (std::uint8_t v : img.pixels()) sum += v;
  const std::uint64_t n = img.size();
  return static_cast<int>((2 * sum + n) / (2 * n));
}

LabelMap watershed_separate(const BinaryMask& mask, Connectivity conn,
                            double min_distance) {
  const LabelMap components = label_components(mask, conn);
  const DistanceMap dm = distance_transform(mask);
  const LabelMap markers = find_markers(dm, min_distance);
  LabelMap basins = watershed_segment(dm, markers, mask, conn);
  for (std::size_t i = 0; i < basins.size(); ++i) {
    if (basins[i] == 0 && components[i] != 0) {
      basins[i] = markers.count() + components[i];
    }
  }
  return relabel_raster_order(basins);
}

LabelMap segment_iteration(const GrayImage& working, int threshold,
                           const DetectConfig& cfg, int iteration) {
  const int erosions = cfg.erode_schedule.at(iteration - 1);
  const int dilations = cfg.effective_dilate_schedule().at(iteration - 1);

  BinaryMask mask = apply_threshold(working, threshold);
  if (erosions > 0) mask = erode(mask, cfg.se, erosions);
  if (dilations > 0) mask = dilate(mask, cfg.se, dilations);

  LabelMap labels = cfg.separation == Separation::kWatershed
                        ? watershed_separate(mask, cfg.connectivity, cfg.min_distance)
                        : label_components(mask, cfg.connectivity);
  labels = filter_small(labels, cfg.min_area);
  if (cfg.drop_border) labels = drop_border_components(labels);
  return labels;
}

DetectResult detect(const GrayImage& img, const DetectConfig& cfg) {
  if (img.empty()) {
    throw Error(ErrorCode::kEmptyInput, "detect: image is empty");
  }
  cfg.validate();

  DetectResult result;
  GrayImage working = img;
  result.stop_reason = StopReason::kMaxIterations;

  for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
    const Histogram256 hist = histogram(working);
    int t = 0;
    if (cfg.threshold_mode == ThresholdMode::kOtsuPerIteration) {
      const auto found = contrast_otsu(hist, cfg.min_contrast);
      if (!found) {
        result.stop_reason = StopReason::kLowContrast;
        break;
      }
      t = *found;
    } else {
      t = cfg.fixed_thresholds[iteration - 1];
    }

    if (!result.thresholds_used.empty() && t >= result.thresholds_used.back()) {
      result.stop_reason = StopReason::kThresholdNotDecreasing;
      break;
    }
    if (t <= cfg.threshold_floor) {
      result.stop_reason = StopReason::kThresholdFloor;
      break;
    }
    result.thresholds_used.push_back(t);

    LabelMap labels = segment_iteration(working, t, cfg, iteration);
    std::vector<Particle> found = measure(labels, img, iteration);

    // Renumber into the merged label space.
    const int offset = static_cast<int>(result.particles.size());
    for (auto& p : found) p.label += offset;
    LabelMap merged = labels;
    for (auto& v : merged.pixels()) {
      if (v != 0) v += offset;
    }

    result.per_iteration_counts.push_back(static_cast<int>(found.size()));
    result.particles.insert(result.particles.end(), found.begin(), found.end());

    if (found.empty()) {
      result.iteration_labels.push_back(std::move(merged));
      result.stop_reason = StopReason::kNoDetections;
      break;
    }
    const LabelMap masked =
        cfg.mask_footprint
            ? threshold_footprint(apply_threshold(working, t), labels, cfg.connectivity)
            : labels;
    working = mask_out(working, masked, rounded_mean(working));
    result.iteration_labels.push_back(std::move(merged));
  }

  result.final_masked_image = std::move(working);
  return result;
}

}  // namespace nanodetect
