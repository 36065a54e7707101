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

#include "nanodetect/threshold.hpp"

#include <algorithm>
#include <string>

namespace nanodetect {

namespace {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

// Counts above this would overflow the 128-bit numerators below.
constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 28;

// 192-bit unsigned product, most significant limb first.
struct U192 {
  std::uint64_t hi = 0, mid = 0, lo = 0;

  static U192 mul(u128 a, std::uint64_t b) {
    const u128 lo_part = static_cast<u128>(static_cast<std::uint64_t>(a)) * b;
    const u128 hi_part = static_cast<u128>(static_cast<std::uint64_t>(a >> 64)) * b;
    const u128 mid_sum = hi_part + (lo_part >> 64);
    return U192{static_cast<std::uint64_t>(mid_sum >> 64),
                static_cast<std::uint64_t>(mid_sum),
                static_cast<std::uint64_t>(lo_part)};
  }

  friend auto operator<=>(const U192&, const U192&) = default;
};

// sigma_b^2(t) = d^2 / (N^2 * n0 * n1) with d = s0*N - S*n0. The shared N^2
// factor is dropped, leaving the exact fraction d^2 / (n0 * n1).
struct Score {
  u128 num = 0;           // d^2
  std::uint64_t den = 1;  // n0 * n1, or 1 when a class is empty (num = 0)
  double variance = 0.0;
};

bool less_than(const Score& a, const Score& b) {
  return U192::mul(a.num, b.den) < U192::mul(b.num, a.den);
}

struct Prefix {
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
};

Score score_at(const Prefix& p, std::uint64_t total, std::uint64_t sum) {
  const std::uint64_t n1 = total - p.n0;
  if (p.n0 == 0 || n1 == 0) return {};
  const i128 d = static_cast<i128>(p.s0) * static_cast<i128>(total) -
                 static_cast<i128>(sum) * static_cast<i128>(p.n0);
  const u128 mag = static_cast<u128>(d < 0 ? -d : d);
  Score s;
  s.num = mag * mag;
  s.den = p.n0 * n1;
  const double scaled = static_cast<double>(d) / static_cast<double>(total);
  s.variance = scaled * scaled / static_cast<double>(p.n0) /
               static_cast<double>(n1);
  return s;
}

void check_histogram(const Histogram256& hist) {
  if (hist.total == 0) {
    throw Error(ErrorCode::kEmptyInput, "otsu: histogram is empty");
  }
  if (hist.total > kMaxPixels) {
    throw Error(ErrorCode::kInvalidArgument,
                "otsu: image exceeds " + std::to_string(kMaxPixels) + " pixels");
  }
}

std::uint64_t weighted_sum(const Histogram256& hist) {
  std::uint64_t sum = 0;
  for (int v = 0; v < 256; ++v) sum += static_cast<std::uint64_t>(v) * hist.bins[v];
  return sum;
}

}  // namespace

ThresholdResult otsu(const Histogram256& hist) {
  check_histogram(hist);
  const std::uint64_t sum = weighted_sum(hist);

  int distinct = 0;
  int only_value = 0;
  for (int v = 0; v < 256; ++v) {
    if (hist.bins[v] != 0) {
      ++distinct;
      only_value = v;
    }
  }
  if (distinct == 1) return {only_value, 0.0};

  Prefix prefix;
  Score best;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    prefix.n0 += hist.bins[t];
    prefix.s0 += static_cast<std::uint64_t>(t) * hist.bins[t];
    const Score s = score_at(prefix, hist.total, sum);
    if (less_than(best, s)) {
      best = s;
      best_t = t;
    }
  }
  return {best_t, best.variance};
}

double between_class_variance(const Histogram256& hist, int t) {
  check_histogram(hist);
  if (t < 0 || t > 255) return 0.0;
  Prefix prefix;
  for (int v = 0; v <= t; ++v) {
    prefix.n0 += hist.bins[v];
    prefix.s0 += static_cast<std::uint64_t>(v) * hist.bins[v];
  }
  return score_at(prefix, hist.total, weighted_sum(hist)).variance;
}

ThresholdResult fixed(int t, const Histogram256* hist) {
  if (t < 0 || t > 255) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixed threshold " + std::to_string(t) + " outside [0, 255]");
  }
  ThresholdResult r{t, 0.0};
  if (hist != nullptr && hist->total > 0) {
    r.between_class_variance = between_class_variance(*hist, t);
  }
  return r;
}

BinaryMask apply_threshold(const GrayImage& img, int t) {
  BinaryMask mask(img.width(), img.height());
  std::transform(img.pixels().begin(), img.pixels().end(),
                 mask.pixels().begin(),
                 [t](std::uint8_t v) -> std::uint8_t { return v > t ? 1 : 0; });
  return mask;
}

}  // namespace nanodetect
