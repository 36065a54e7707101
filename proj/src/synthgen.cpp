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

#include "nanodetect/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nanodetect {

namespace {

constexpr int kMaxPlacementAttempts = 10000;

Error config_error(const std::string& key, const std::string& why) {
  return Error(ErrorCode::kConfig, "config key '" + key + "': " + why);
}

void check_range(const IntRange& r, const char* key) {
  if (r.min < 0 || r.max > 255 || r.min > r.max) {
    throw config_error(key, "must satisfy 0 <= min <= max <= 255");
  }
}

void paint_disk(GrayImage& img, const SynthDisk& d) {
  const int r = d.radius;
  const int cx = static_cast<int>(d.cx), cy = static_cast<int>(d.cy);
  for (int y = cy - r; y <= cy + r; ++y) {
    for (int x = cx - r; x <= cx + r; ++x) {
      if (!img.contains(x, y)) continue;
      const int dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r * r) img(x, y) = static_cast<std::uint8_t>(d.level);
    }
  }
}

GrayImage box_blur3(const GrayImage& in) {
  GrayImage out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      int sum = 0, count = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (!in.contains(x + dx, y + dy)) continue;
          sum += in(x + dx, y + dy);
          ++count;
        }
      }
      out(x, y) = static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
    }
  }
  return out;
}

}  // namespace

int PortableRandom::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

double PortableRandom::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double PortableRandom::normal() {
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

void SynthConfig::validate() const {
  if (width < 1) throw config_error("width", "must be >= 1");
  if (height < 1) throw config_error("height", "must be >= 1");
  if (background_level < 0 || background_level > 255) {
    throw config_error("background_level", "must be in [0, 255]");
  }
  check_range(bright_range, "bright_range");
  check_range(faint_range, "faint_range");
  if (!(bright_range.min > faint_range.max)) {
    throw config_error("bright_range", "minimum must exceed faint_range maximum");
  }
  if (!(faint_range.max > background_level)) {
    throw config_error("faint_range", "maximum must exceed background_level");
  }
  if (n_bright < 0) throw config_error("n_bright", "must be >= 0");
  if (n_faint < 0) throw config_error("n_faint", "must be >= 0");
  if (radius_range.min < 1 || radius_range.min > radius_range.max) {
    throw config_error("radius_range", "must satisfy 1 <= min <= max");
  }
  if (min_separation && !(*min_separation >= 0.0)) {
    throw config_error("min_separation", "must be >= 0");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw config_error("noise_sigma", "must be a finite value >= 0");
  }
}

SynthImage generate(const SynthConfig& cfg) {
  cfg.validate();
  PortableRandom rng(cfg.seed);
  SynthImage out{GrayImage(cfg.width, cfg.height,
                           static_cast<std::uint8_t>(cfg.background_level)),
                 {}};
  const double separation = cfg.effective_min_separation();
  auto& disks = out.truth.particles;
  const int total = cfg.n_bright + cfg.n_faint;

  for (int k = 0; k < total; ++k) {
    const bool bright = k < cfg.n_bright;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      const int r = rng.uniform_int(cfg.radius_range.min, cfg.radius_range.max);
      if (cfg.width - 1 - r < r || cfg.height - 1 - r < r) continue;
      const int cx = rng.uniform_int(r, cfg.width - 1 - r);
      const int cy = rng.uniform_int(r, cfg.height - 1 - r);
      placed = std::all_of(disks.begin(), disks.end(), [&](const SynthDisk& d) {
        if (separation <= 0.0) return true;
        const double need = std::max(separation, r + d.radius + 2.0);
        return std::hypot(cx - d.cx, cy - d.cy) >= need;
      });
      if (placed) {
        const IntRange& levels = bright ? cfg.bright_range : cfg.faint_range;
        SynthDisk d;
        d.cx = cx;
        d.cy = cy;
        d.radius = r;
        d.population = bright ? Population::kBright : Population::kFaint;
        d.level = rng.uniform_int(levels.min, levels.max);
        disks.push_back(d);
      }
    }
    if (!placed) {
      throw Error(ErrorCode::kPlacement,
                  "could not place disk " + std::to_string(k + 1) + " of " +
                      std::to_string(total) + " after " +
                      std::to_string(kMaxPlacementAttempts) +
                      " attempts (placed " + std::to_string(disks.size()) + ")");
    }
  }

  for (const auto& d : disks) paint_disk(out.image, d);

  if (cfg.noise_sigma > 0.0) {
    for (auto& v : out.image.pixels()) {
      const double noisy = v + cfg.noise_sigma * rng.normal();
      v = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
    }
  }
  if (cfg.blur == Blur::kBox3) out.image = box_blur3(out.image);
  return out;
}

GroundTruth truth_to_ground_truth(const SynthTruth& truth) {
  GroundTruth gt;
  gt.source = "synthgen:";
  for (const auto& d : truth.particles) {
    gt.points.push_back({d.cx, d.cy});
    gt.source += d.population == Population::kBright ? 'b' : 'f';
  }
  return gt;
}

}  // namespace nanodetect
