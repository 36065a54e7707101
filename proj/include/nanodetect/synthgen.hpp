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
#include <optional>
#include <random>
#include <vector>

#include "nanodetect/evaluate.hpp"
#include "nanodetect/raster.hpp"

namespace nanodetect {

struct IntRange {
  int min = 0;
  int max = 0;  // inclusive
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

enum class Blur { kNone, kBox3 };
enum class Population { kBright, kFaint };

/// Synthetic micrograph: bright and faint disks on a flat background with
/// additive Gaussian noise.
struct SynthConfig {
  int width = 256;
  int height = 256;
  int background_level = 30;
  IntRange bright_range{117, 186};
  IntRange faint_range{70, 110};
  int n_bright = 10;
  int n_faint = 5;
  IntRange radius_range{3, 8};
  /// Minimum center-to-center distance. Unset: 2 * radius_range.max + 2.
  /// When positive, disks are also kept from touching (centers at least
  /// r1 + r2 + 2 apart). Zero allows overlap.
  std::optional<double> min_separation;
  double noise_sigma = 4.0;
  Blur blur = Blur::kNone;
  std::uint64_t seed = 1;

  double effective_min_separation() const {
    return min_separation ? *min_separation : 2.0 * radius_range.max + 2.0;
  }

  /// Throws Error(kConfig) naming the offending field.
  void validate() const;
};

struct SynthDisk {
  double cx = 0.0;
  double cy = 0.0;
  int radius = 0;
  Population population = Population::kBright;
  int level = 0;
};

struct SynthTruth {
  std::vector<SynthDisk> particles;  // placement order: bright, then faint
};

struct SynthImage {
  GrayImage image;
  SynthTruth truth;
};

/// Deterministic for a fixed config. Throws kPlacement when the disks cannot
/// be placed within 10,000 rejection-sampling attempts.
SynthImage generate(const SynthConfig& cfg);

/// Disk centers as points; source tag lists populations ("b"/"f").
GroundTruth truth_to_ground_truth(const SynthTruth& truth);

/// Portable draws on top of std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. Distribution code is ours so results do not depend on
/// the standard library vendor.
class PortableRandom {
 public:
  explicit PortableRandom(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [lo, hi] by rejection on the top of the 64-bit range.
  int uniform_int(int lo, int hi);
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform01();
  /// Standard normal by the Marsaglia polar method (one value per call; the
  /// spare is discarded).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace nanodetect
