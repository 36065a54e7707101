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

#include "nanodetect/watershed.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

namespace nanodetect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of sampled function f (kInf = no site).
// Writes min_q (i - q)^2 + f[q] into d.
void edt_1d(const std::vector<double>& f, std::vector<double>& d,
            std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) /
                       (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf
                  : ((f[q] + double(q) * q) -
                     (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) /
                        (2.0 * (q - v[k - 1]));
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  int j = 0;
  for (int i = 0; i < n; ++i) {
    while (z[j + 1] < i) ++j;
    const double dx = i - v[j];
    d[i] = dx * dx + f[v[j]];
  }
}

}  // namespace

DistanceMap distance_transform(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  DistanceMap dm{Raster<double, DistanceTag>(w, h, 0.0), false};
  if (mask.empty()) return dm;

  if (count_foreground(mask) == mask.size()) {
    dm.degenerate = true;
    std::fill(dm.values.pixels().begin(), dm.values.pixels().end(), kInf);
    return dm;
  }

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  Raster<double, DistanceTag> sq(w, h, 0.0);

  // Columns: background pixels are the sites.
  f.resize(h);
  d.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = mask(x, y) ? kInf : 0.0;
    edt_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) sq(x, y) = d[y];
  }
  // Rows over the column result.
  f.resize(w);
  d.resize(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = sq(x, y);
    edt_1d(f, d, v, z);
    for (int x = 0; x < w; ++x) dm.values(x, y) = std::sqrt(d[x]);
  }
  return dm;
}

LabelMap find_markers(const DistanceMap& dm, double min_distance) {
  if (!(min_distance >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "find_markers: min_distance must be >= 1");
  }
  const int w = dm.width(), h = dm.height();
  LabelMap out(w, h);
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> plateau;
  int count = 0;

  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const double value = dm(x0, y0);
      const std::size_t i0 = out.index(x0, y0);
      if (visited[i0] || value <= 0.0 || !std::isfinite(value) ||
          value < min_distance) {
        continue;
      }
      // Flood the equal-valued plateau, noting any strictly higher neighbor.
      plateau.clear();
      plateau.emplace_back(x0, y0);
      visited[i0] = 1;
      bool is_max = true;
      for (std::size_t head = 0; head < plateau.size(); ++head) {
        const auto [x, y] = plateau[head];
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = x + dx, ny = y + dy;
            if (!out.contains(nx, ny)) continue;
            const double nv = dm(nx, ny);
            if (nv > value) {
              is_max = false;
            } else if (nv == value && !visited[out.index(nx, ny)]) {
              visited[out.index(nx, ny)] = 1;
              plateau.emplace_back(nx, ny);
            }
          }
        }
      }
      if (!is_max) continue;
      ++count;
      for (const auto& [x, y] : plateau) out(x, y) = count;
    }
  }
  out.set_count(count);
  return out;
}

LabelMap watershed_segment(const DistanceMap& dm, const LabelMap& markers,
                           const BinaryMask& mask, Connectivity conn) {
  if (!same_shape(dm, markers) || !same_shape(dm, mask)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "watershed: distance map, markers and mask differ in size");
  }

  struct Entry {
    double priority;
    std::int32_t label;
    std::uint64_t seq;
    int x, y;
  };
  // Highest distance first, then lower label, then FIFO.
  auto after = [](const Entry& a, const Entry& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    if (a.label != b.label) return a.label > b.label;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(after)> queue(after);

  const int w = mask.width(), h = mask.height();
  LabelMap out(w, h);
  out.set_count(markers.count());
  std::uint64_t seq = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = markers(x, y);
      if (l == 0) continue;
      if (!mask(x, y)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "watershed: marker at (" + std::to_string(x) + ", " +
                        std::to_string(y) + ") lies outside the mask");
      }
      out(x, y) = l;
      queue.push({dm(x, y), l, seq++, x, y});
    }
  }

  static constexpr int kDx[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int neighbors = conn == Connectivity::kEight ? 8 : 4;

  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    for (int k = 0; k < neighbors; ++k) {
      const int nx = e.x + kDx[k], ny = e.y + kDy[k];
      if (!mask.contains(nx, ny) || !mask(nx, ny) || out(nx, ny) != 0) continue;
      out(nx, ny) = e.label;
      queue.push({dm(nx, ny), e.label, seq++, nx, ny});
    }
  }
  return out;
}

}  // namespace nanodetect
