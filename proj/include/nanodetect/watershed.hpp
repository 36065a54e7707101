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

#include <vector>

#include "nanodetect/labeling.hpp"
#include "nanodetect/raster.hpp"

namespace nanodetect {

struct DistanceTag;

/// Euclidean distance from each foreground pixel to the nearest background
/// pixel; 0 on background. Pixels beyond the frame count as foreground, so a
/// mask without any background has no finite distances: every entry is then
/// +infinity and `degenerate` is set.
struct DistanceMap {
  Raster<double, DistanceTag> values;
  bool degenerate = false;

  int width() const noexcept { return values.width(); }
  int height() const noexcept { return values.height(); }
  double operator()(int x, int y) const noexcept { return values(x, y); }
};

/// Exact EDT by separable lower envelopes of parabolas over squared integer
/// distances (Felzenszwalb-Huttenlocher).
DistanceMap distance_transform(const BinaryMask& mask);

/// Regional maxima plateaus (8-connected sets of equal value with no greater
/// 8-neighbor) whose value is >= `min_distance`, one label each in raster
/// order. Infinite distances never become markers.
LabelMap find_markers(const DistanceMap& dm, double min_distance);

/// Priority flood from the markers in order of decreasing distance. Each
/// foreground pixel takes the label of the first basin to reach it; equal
/// priorities go to the lower label, then to the earlier push. Foreground
/// unreachable from every marker stays 0. Throws kInvalidArgument if a
/// marker lies on background.
LabelMap watershed_segment(const DistanceMap& dm, const LabelMap& markers,
                           const BinaryMask& mask,
                           Connectivity conn = Connectivity::kEight);

}  // namespace nanodetect
