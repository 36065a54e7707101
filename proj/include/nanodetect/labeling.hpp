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
#include <utility>
#include <vector>

#include "nanodetect/raster.hpp"

namespace nanodetect {

enum class Connectivity { kFour, kEight };

struct ComponentSize {
  int label = 0;
  std::int64_t pixels = 0;
  friend bool operator==(const ComponentSize&, const ComponentSize&) = default;
};

/// Two-pass union-find labeling. Labels are 1..count, numbered in raster
/// order of each component's first pixel, so output is deterministic.
LabelMap label_components(const BinaryMask& mask,
                          Connectivity conn = Connectivity::kEight);

/// One entry per label 1..count.
std::vector<ComponentSize> component_sizes(const LabelMap& lm);

/// Drops components smaller than `min_area` pixels and renumbers the rest
/// compactly, keeping raster order.
LabelMap filter_small(const LabelMap& lm, std::int64_t min_area);

/// Renumbers arbitrary non-negative labels to 1..count by raster order of
/// first appearance. Pixels sharing an input label keep sharing one.
LabelMap relabel_raster_order(const LabelMap& lm);

/// Foreground support (label != 0).
BinaryMask support(const LabelMap& lm);

}  // namespace nanodetect
