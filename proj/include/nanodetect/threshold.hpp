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

#include <optional>

#include "nanodetect/raster.hpp"

namespace nanodetect {

/// Pixels with intensity strictly greater than `t` are foreground.
struct ThresholdResult {
  int t = 0;
  double between_class_variance = 0.0;
};

/// Otsu's threshold: the t maximizing w0*w1*(mu0 - mu1)^2 with class 0 the
/// intensities <= t. Comparisons are exact on integer counts; ties resolve to
/// the smallest t. A histogram holding a single intensity returns that value
/// with zero variance (empty foreground). Throws on an empty histogram.
ThresholdResult otsu(const Histogram256& hist);

/// Between-class variance at `t`, zero when either class is empty.
double between_class_variance(const Histogram256& hist, int t);

/// User-chosen threshold. Variance is taken from `hist` when given.
ThresholdResult fixed(int t, const Histogram256* hist = nullptr);

BinaryMask apply_threshold(const GrayImage& img, int t);

}  // namespace nanodetect
