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

// Independent reference implementations used only by tests. Each one takes
// the slow, obvious route so it shares no code path with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "nanodetect/evaluate.hpp"
#include "nanodetect/labeling.hpp"
#include "nanodetect/morphology.hpp"
#include "nanodetect/raster.hpp"

namespace oracle {

using nanodetect::BinaryMask;
using nanodetect::GrayImage;
using nanodetect::LabelMap;

// ---- generators -------------------------------------------------------------

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution on(density);
  BinaryMask m(w, h);
  for (auto& v : m.pixels()) v = on(rng) ? 1 : 0;
  return m;
}

/// Mixture of 2-3 Gaussian intensity clusters, clamped to [0, 255]. Narrow
/// clusters collapse to a single level, which produces tied thresholds.
inline GrayImage random_mixture_image(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> clusters(2, 3);
  std::uniform_real_distribution<double> center(0.0, 255.0), spread(0.2, 30.0);
  const int k = clusters(rng);
  std::vector<std::normal_distribution<double>> dists;
  for (int i = 0; i < k; ++i) dists.emplace_back(center(rng), spread(rng));
  std::uniform_int_distribution<int> pick(0, k - 1);
  GrayImage img(w, h);
  for (auto& v : img.pixels()) {
    const double s = dists[pick(rng)](rng);
    v = static_cast<std::uint8_t>(std::clamp(std::lround(s), 0L, 255L));
  }
  return img;
}

// ---- raster -----------------------------------------------------------------

inline std::array<std::uint64_t, 256> naive_histogram(const GrayImage& img) {
  std::array<std::uint64_t, 256> bins{};
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) bins[img(x, y)] += 1;
  return bins;
}

// ---- threshold --------------------------------------------------------------

struct SweepResult {
  int t = 0;
  int maximizers = 0;  // thresholds sharing the maximal variance
};

/// Exhaustive sweep of w0 * w1 * (mu0 - mu1)^2 over all 256 thresholds.
/// Written as (s0*n1 - s1*n0)^2 / (n0*n1*N^2) and compared by exact
/// big-integer cross-multiplication. Smallest maximizer wins; a
/// single-valued histogram returns that value.
inline SweepResult otsu_sweep_detail(const std::array<std::uint64_t, 256>& bins) {
  using boost::multiprecision::cpp_int;
  cpp_int total = 0, sum = 0;
  int distinct = 0, only = 0;
  for (int v = 0; v < 256; ++v) {
    total += bins[v];
    sum += cpp_int(bins[v]) * v;
    if (bins[v]) {
      ++distinct;
      only = v;
    }
  }
  if (distinct == 1) return {only, 1};
  // Best so far as numerator / denominator; starts at 0/1.
  cpp_int best_num = -1, best_den = 1;
  SweepResult out;
  cpp_int n0 = 0, s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += bins[t];
    s0 += cpp_int(bins[t]) * t;
    const cpp_int n1 = total - n0, s1 = sum - s0;
    cpp_int num = 0, den = 1;
    if (n0 != 0 && n1 != 0) {
      const cpp_int diff = s0 * n1 - s1 * n0;
      num = diff * diff;
      den = n0 * n1 * total * total;
    }
    const cpp_int lhs = num * best_den, rhs = best_num * den;
    if (lhs > rhs) {
      best_num = num;
      best_den = den;
      out.t = t;
      out.maximizers = 1;
    } else if (lhs == rhs) {
      ++out.maximizers;
    }
  }
  return out;
}

inline int otsu_sweep(const std::array<std::uint64_t, 256>& bins) {
  return otsu_sweep_detail(bins).t;
}

// ---- morphology -------------------------------------------------------------

inline BinaryMask naive_erode(const BinaryMask& m, const nanodetect::StructuringElement& se,
                              int iterations) {
  BinaryMask cur = m;
  for (int it = 0; it < iterations; ++it) {
    BinaryMask next(cur.width(), cur.height());
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        bool all = true;
        for (const auto& o : se.offsets()) {
          const int nx = x + o.dx, ny = y + o.dy;
          if (!cur.contains(nx, ny) || cur(nx, ny) != 1) {
            all = false;
            break;
          }
        }
        next(x, y) = all ? 1 : 0;
      }
    }
    cur = next;
  }
  return cur;
}

inline BinaryMask naive_dilate(const BinaryMask& m, const nanodetect::StructuringElement& se,
                               int iterations) {
  BinaryMask cur = m;
  for (int it = 0; it < iterations; ++it) {
    BinaryMask next(cur.width(), cur.height());
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        bool any = false;
        for (const auto& o : se.offsets()) {
          // Reflected element: look at p - o.
          const int nx = x - o.dx, ny = y - o.dy;
          if (cur.contains(nx, ny) && cur(nx, ny) == 1) {
            any = true;
            break;
          }
        }
        next(x, y) = any ? 1 : 0;
      }
    }
    cur = next;
  }
  return cur;
}

inline bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

inline BinaryMask complement(const BinaryMask& m) {
  BinaryMask out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 0 : 1;
  return out;
}

inline BinaryMask pad(const BinaryMask& m, int r) {
  BinaryMask out(m.width() + 2 * r, m.height() + 2 * r);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) out(x + r, y + r) = m(x, y);
  return out;
}

inline BinaryMask crop(const BinaryMask& m, int r) {
  BinaryMask out(m.width() - 2 * r, m.height() - 2 * r);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out(x, y) = m(x + r, y + r);
  return out;
}

// ---- labeling ---------------------------------------------------------------

/// Recursive flood fill; labels in raster order of first pixel.
inline LabelMap flood_fill_labels(const BinaryMask& m, bool eight) {
  LabelMap out(m.width(), m.height());
  int count = 0;
  std::function<void(int, int, int)> fill = [&](int x, int y, int label) {
    if (!m.contains(x, y) || !m(x, y) || out(x, y) != 0) return;
    out(x, y) = label;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        if (!eight && dx != 0 && dy != 0) continue;
        fill(x + dx, y + dy, label);
      }
  };
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m(x, y) && out(x, y) == 0) fill(x, y, ++count);
  out.set_count(count);
  return out;
}

// ---- region properties --------------------------------------------------------

struct BruteRegion {
  long double n = 0, cx = 0, cy = 0;
  long double mu20 = 0, mu02 = 0, mu11 = 0;  // divided by n
  std::int64_t perimeter = 0;
  long double mean_intensity = 0;
  long double major = 0, minor = 0, orientation = 0;
};

/// Per-pixel summation over all pixels carrying `label`, in long double.
inline BruteRegion brute_region(const LabelMap& lm, const GrayImage& src, int label) {
  BruteRegion r;
  long double sx = 0, sy = 0, si = 0;
  for (int y = 0; y < lm.height(); ++y)
    for (int x = 0; x < lm.width(); ++x)
      if (lm(x, y) == label) {
        r.n += 1;
        sx += x;
        sy += y;
        si += src(x, y);
        const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& q : nb)
          if (!lm.contains(q[0], q[1]) || lm(q[0], q[1]) != label) ++r.perimeter;
      }
  r.cx = sx / r.n;
  r.cy = sy / r.n;
  r.mean_intensity = si / r.n;
  for (int y = 0; y < lm.height(); ++y)
    for (int x = 0; x < lm.width(); ++x)
      if (lm(x, y) == label) {
        const long double dx = x - r.cx, dy = y - r.cy;
        r.mu20 += dx * dx;
        r.mu02 += dy * dy;
        r.mu11 += dx * dy;
      }
  r.mu20 /= r.n;
  r.mu02 /= r.n;
  r.mu11 /= r.n;
  const long double tr = (r.mu20 + r.mu02) / 2;
  const long double rad = std::sqrt(((r.mu20 - r.mu02) / 2) * ((r.mu20 - r.mu02) / 2) +
                                    r.mu11 * r.mu11);
  r.major = 4 * std::sqrt(tr + rad);
  r.minor = 4 * std::sqrt(std::max<long double>(0, tr - rad));
  r.orientation = (r.mu11 == 0 && r.mu20 == r.mu02)
                      ? 0
                      : std::atan2(2 * r.mu11, r.mu20 - r.mu02) / 2;
  return r;
}

inline bool close_rel(long double a, long double b, long double rel = 1e-9L,
                      long double abs_floor = 1e-12L) {
  return std::fabs(a - b) <= std::max(abs_floor, rel * std::max(std::fabs(a), std::fabs(b)));
}

// ---- distance transform -------------------------------------------------------

/// All-pairs minimum Euclidean distance to an in-frame background pixel.
inline std::vector<double> brute_edt(const BinaryMask& m) {
  std::vector<std::pair<int, int>> zeros;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (!m(x, y)) zeros.emplace_back(x, y);
  std::vector<double> out(m.size(), 0.0);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [zx, zy] : zeros)
        best = std::min(best, std::sqrt(double((x - zx) * (x - zx) + (y - zy) * (y - zy))));
      out[m.index(x, y)] = best;
    }
  return out;
}

// ---- evaluation ---------------------------------------------------------------

/// Maximum-cardinality radius-bounded matching by exhaustive search over
/// detection subsets (memoized on (gt index, used-detection bitmask)).
inline int max_matching(const std::vector<nanodetect::Point>& gt,
                        const std::vector<nanodetect::Point>& det, double radius) {
  const int g = static_cast<int>(gt.size()), d = static_cast<int>(det.size());
  std::vector<std::vector<int>> memo(g + 1, std::vector<int>(1u << d, -1));
  std::function<int(int, unsigned)> best = [&](int i, unsigned used) -> int {
    if (i == g) return 0;
    int& slot = memo[i][used];
    if (slot >= 0) return slot;
    int b = best(i + 1, used);
    for (int j = 0; j < d; ++j) {
      if (used & (1u << j)) continue;
      const double dx = gt[i].x - det[j].x, dy = gt[i].y - det[j].y;
      if (dx * dx + dy * dy <= radius * radius) b = std::max(b, 1 + best(i + 1, used | (1u << j)));
    }
    return slot = b;
  };
  return best(0, 0);
}

/// Direct Pearson formula in 50-digit floating point.
inline double pearson_extended(const std::vector<double>& xs, const std::vector<double>& ys) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const std::size_t n = xs.size();
  big sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const big mx = sx / n, my = sy / n;
  big sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const big dx = big(xs[i]) - mx, dy = big(ys[i]) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return static_cast<double>(sxy / boost::multiprecision::sqrt(sxx * syy));
}

// ---- synthetic images -----------------------------------------------------------

inline std::int64_t disk_area(int radius) {
  std::int64_t n = 0;
  for (int y = -radius; y <= radius; ++y)
    for (int x = -radius; x <= radius; ++x)
      if (x * x + y * y <= radius * radius) ++n;
  return n;
}

}  // namespace oracle
