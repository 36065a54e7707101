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
#include <iosfwd>
#include <vector>

#include "nanodetect/raster.hpp"

namespace nanodetect {

struct BoundingBox {
  int x_min = 0, y_min = 0, x_max = 0, y_max = 0;  // inclusive
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Features of one detected region. Pixels are unit points at integer
/// coordinates; x is the column, y the row.
struct Particle {
  int label = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  std::int64_t area = 0;
  /// 4-neighbor edges between region and non-region pixels; the frame
  /// counts as non-region.
  std::int64_t perimeter = 0;
  double major_axis = 0.0;  // 4 * sqrt(lambda1)
  double minor_axis = 0.0;  // 4 * sqrt(lambda2)
  /// Radians in (-pi/2, pi/2]; 0 for isotropic regions.
  double orientation = 0.0;
  double mean_intensity = 0.0;
  BoundingBox bbox;
  int iteration = 1;

  // Second central moments divided by area (covariance entries).
  double mu20 = 0.0;
  double mu02 = 0.0;
  double mu11 = 0.0;
};

/// One Particle per label of `lm`, in label order. Intensity features are
/// read from `src`. Throws kDimensionMismatch on shape mismatch.
std::vector<Particle> measure(const LabelMap& lm, const GrayImage& src,
                              int iteration = 1);

inline constexpr const char* kParticleCsvHeader =
    "label,x,y,area,major_axis,minor_axis,perimeter,mean_intensity,"
    "orientation,iteration";

/// Header line, then one row per particle; reals with six decimals.
void write_particles_csv(std::ostream& out, const std::vector<Particle>& particles);
void to_csv(const std::vector<Particle>& particles,
            const std::filesystem::path& path);

/// Parses the format written by to_csv. Bounding boxes and moments are not
/// part of the file and come back zeroed. Errors carry the line number.
std::vector<Particle> read_particles_csv(std::istream& in);
std::vector<Particle> load_particles_csv(const std::filesystem::path& path);

}  // namespace nanodetect
