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

#include "nanodetect/labeling.hpp"

#include <numeric>
#include <string>
#include <unordered_map>

namespace nanodetect {

namespace {

class DisjointSet {
 public:
  int make_set() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller root so provisional labels stay ordered.
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

LabelMap label_components(const BinaryMask& mask, Connectivity conn) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> provisional(mask.size(), -1);
  DisjointSet sets;

  // First pass: look at already-visited neighbors (W, NW, N, NE).
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = mask.index(x, y);
      if (!mask[i]) continue;

      int assigned = -1;
      auto consider = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w) return;
        const int other = provisional[mask.index(nx, ny)];
        if (other < 0) return;
        if (assigned < 0) assigned = other;
        else sets.join(assigned, other);
      };

      consider(x - 1, y);
      consider(x, y - 1);
      if (conn == Connectivity::kEight) {
        consider(x - 1, y - 1);
        consider(x + 1, y - 1);
      }
      provisional[i] = assigned >= 0 ? assigned : sets.make_set();
    }
  }

  // Second pass: number roots by first appearance in raster order.
  std::unordered_map<int, int> final_label;
  std::vector<std::int32_t> out(mask.size(), 0);
  int count = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (provisional[i] < 0) continue;
    const int root = sets.find(provisional[i]);
    auto [it, inserted] = final_label.try_emplace(root, count + 1);
    if (inserted) ++count;
    out[i] = it->second;
  }
  return LabelMap(w, h, std::move(out), count);
}

std::vector<ComponentSize> component_sizes(const LabelMap& lm) {
  std::vector<ComponentSize> sizes(lm.count());
  for (int l = 0; l < lm.count(); ++l) sizes[l].label = l + 1;
  for (std::int32_t v : lm.pixels()) {
    if (v > 0) ++sizes[v - 1].pixels;
  }
  return sizes;
}

LabelMap filter_small(const LabelMap& lm, std::int64_t min_area) {
  if (min_area < 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_area must be >= 0");
  }
  const auto sizes = component_sizes(lm);
  // Labels are already in raster order, so keeping survivors in label order
  // preserves it.
  std::vector<std::int32_t> remap(lm.count() + 1, 0);
  int next = 0;
  for (const auto& s : sizes) {
    if (s.pixels >= min_area) remap[s.label] = ++next;
  }
  std::vector<std::int32_t> out(lm.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = remap[lm[i]];
  return LabelMap(lm.width(), lm.height(), std::move(out), next);
}

LabelMap relabel_raster_order(const LabelMap& lm) {
  std::unordered_map<std::int32_t, std::int32_t> remap;
  std::vector<std::int32_t> out(lm.size(), 0);
  int count = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int32_t v = lm[i];
    if (v == 0) continue;
    if (v < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative label in label map");
    }
    auto [it, inserted] = remap.try_emplace(v, count + 1);
    if (inserted) ++count;
    out[i] = it->second;
  }
  return LabelMap(lm.width(), lm.height(), std::move(out), count);
}

BinaryMask support(const LabelMap& lm) {
  BinaryMask out(lm.width(), lm.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lm[i] != 0 ? 1 : 0;
  return out;
}

}  // namespace nanodetect
