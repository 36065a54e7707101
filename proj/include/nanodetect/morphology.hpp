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

#include <string>
#include <vector>

#include "nanodetect/raster.hpp"

namespace nanodetect {

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Flat binary structuring element. Always contains the origin.
class StructuringElement {
 public:
  /// Throws kInvalidArgument if `offsets` is empty or lacks (0, 0).
  StructuringElement(std::vector<Offset> offsets, std::string name);

  /// 3x3 square, 8-neighborhood.
  static StructuringElement square3();
  /// 3x3 cross, 4-neighborhood.
  static StructuringElement cross3();
  /// Looks up "square3" or "cross3".
  static StructuringElement by_name(const std::string& name);

  const std::vector<Offset>& offsets() const noexcept { return offsets_; }
  const std::string& name() const noexcept { return name_; }

  /// (dx,dy) present iff (-dx,-dy) present.
  bool symmetric() const;
  /// Largest |dx| or |dy|.
  int radius() const;

 private:
  std::vector<Offset> offsets_;
  std::string name_;
};

// Pixels outside the frame count as background for both erosion and
// dilation. `iterations` must be >= 1.

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se,
                 int iterations = 1);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se,
                  int iterations = 1);

/// Erode then dilate, both `iterations` times.
BinaryMask open(const BinaryMask& mask, const StructuringElement& se,
                int iterations = 1);
/// Dilate then erode, both `iterations` times.
BinaryMask close(const BinaryMask& mask, const StructuringElement& se,
                 int iterations = 1);

}  // namespace nanodetect
