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

#include "nanodetect/morphology.hpp"

#include <algorithm>
#include <cstdlib>

namespace nanodetect {

StructuringElement::StructuringElement(std::vector<Offset> offsets,
                                       std::string name)
    : offsets_(std::move(offsets)), name_(std::move(name)) {
  if (offsets_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "structuring element is empty");
  }
  if (std::find(offsets_.begin(), offsets_.end(), Offset{0, 0}) ==
      offsets_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "structuring element must contain the origin");
  }
}

StructuringElement StructuringElement::square3() {
  std::vector<Offset> o;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) o.push_back({dx, dy});
  return StructuringElement(std::move(o), "square3");
}

StructuringElement StructuringElement::cross3() {
  return StructuringElement({{0, -1}, {-1, 0}, {0, 0}, {1, 0}, {0, 1}},
                            "cross3");
}

StructuringElement StructuringElement::by_name(const std::string& name) {
  if (name == "square3") return square3();
  if (name == "cross3") return cross3();
  throw Error(ErrorCode::kInvalidArgument,
              "unknown structuring element '" + name + "'");
}

bool StructuringElement::symmetric() const {
  return std::all_of(offsets_.begin(), offsets_.end(), [this](Offset o) {
    return std::find(offsets_.begin(), offsets_.end(), Offset{-o.dx, -o.dy}) !=
           offsets_.end();
  });
}

int StructuringElement::radius() const {
  int r = 0;
  for (const auto& o : offsets_) r = std::max({r, std::abs(o.dx), std::abs(o.dy)});
  return r;
}

namespace {

void check_iterations(int iterations) {
  if (iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "morphology iterations must be >= 1");
  }
}

// One erosion pass: out[p] = AND over offsets of in[p + o], 0 outside.
BinaryMask erode_once(const BinaryMask& in, const StructuringElement& se) {
  const int w = in.width(), h = in.height();
  BinaryMask out(w, h, 1);
  for (const Offset o : se.offsets()) {
    for (int y = 0; y < h; ++y) {
      auto dst = out.row(y);
      const int sy = y + o.dy;
      if (sy < 0 || sy >= h) {
        std::fill(dst.begin(), dst.end(), 0);
        continue;
      }
      const auto src = in.row(sy);
      const int x0 = std::max(0, -o.dx), x1 = std::min(w, w - o.dx);
      for (int x = 0; x < std::min(x0, w); ++x) dst[x] = 0;
      for (int x = x0; x < x1; ++x) dst[x] &= src[x + o.dx];
      for (int x = std::max(x1, 0); x < w; ++x) dst[x] = 0;
    }
  }
  return out;
}

// One dilation pass: out[p] = OR over offsets of in[p - o], 0 outside.
BinaryMask dilate_once(const BinaryMask& in, const StructuringElement& se) {
  const int w = in.width(), h = in.height();
  BinaryMask out(w, h, 0);
  for (const Offset o : se.offsets()) {
    for (int y = 0; y < h; ++y) {
      const int sy = y - o.dy;
      if (sy < 0 || sy >= h) continue;
      auto dst = out.row(y);
      const auto src = in.row(sy);
      const int x0 = std::max(0, o.dx), x1 = std::min(w, w + o.dx);
      for (int x = x0; x < x1; ++x) dst[x] |= src[x - o.dx];
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se,
                 int iterations) {
  check_iterations(iterations);
  BinaryMask cur = erode_once(mask, se);
  for (int i = 1; i < iterations; ++i) cur = erode_once(cur, se);
  return cur;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se,
                  int iterations) {
  check_iterations(iterations);
  BinaryMask cur = dilate_once(mask, se);
  for (int i = 1; i < iterations; ++i) cur = dilate_once(cur, se);
  return cur;
}

BinaryMask open(const BinaryMask& mask, const StructuringElement& se,
                int iterations) {
  return dilate(erode(mask, se, iterations), se, iterations);
}

BinaryMask close(const BinaryMask& mask, const StructuringElement& se,
                 int iterations) {
  return erode(dilate(mask, se, iterations), se, iterations);
}

}  // namespace nanodetect
