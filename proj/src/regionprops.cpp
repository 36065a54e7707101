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

#include "nanodetect/regionprops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "text_util.hpp"

namespace nanodetect {

namespace {

__extension__ using i128 = __int128;

struct Accumulator {
  std::int64_t n = 0;
  std::int64_t sx = 0, sy = 0;
  std::int64_t sxx = 0, syy = 0, sxy = 0;
  std::int64_t intensity = 0;
  std::int64_t perimeter = 0;
  BoundingBox bbox{0, 0, -1, -1};

  void add(int x, int y, int value) {
    if (n == 0) {
      bbox = {x, y, x, y};
    } else {
      bbox.x_min = std::min(bbox.x_min, x);
      bbox.y_min = std::min(bbox.y_min, y);
      bbox.x_max = std::max(bbox.x_max, x);
      bbox.y_max = std::max(bbox.y_max, y);
    }
    ++n;
    sx += x;
    sy += y;
    sxx += std::int64_t{x} * x;
    syy += std::int64_t{y} * y;
    sxy += std::int64_t{x} * y;
    intensity += value;
  }
};

Particle finish(int label, const Accumulator& a, int iteration) {
  Particle p;
  p.label = label;
  p.iteration = iteration;
  p.area = a.n;
  p.perimeter = a.perimeter;
  p.bbox = a.bbox;

  const double n = static_cast<double>(a.n);
  p.centroid_x = static_cast<double>(a.sx) / n;
  p.centroid_y = static_cast<double>(a.sy) / n;
  p.mean_intensity = static_cast<double>(a.intensity) / n;

  // n^2 * central moment, exact in 128-bit integers.
  const i128 cxx = static_cast<i128>(a.n) * a.sxx - static_cast<i128>(a.sx) * a.sx;
  const i128 cyy = static_cast<i128>(a.n) * a.syy - static_cast<i128>(a.sy) * a.sy;
  const i128 cxy = static_cast<i128>(a.n) * a.sxy - static_cast<i128>(a.sx) * a.sy;
  const double n2 = n * n;
  p.mu20 = static_cast<double>(cxx) / n2;
  p.mu02 = static_cast<double>(cyy) / n2;
  p.mu11 = static_cast<double>(cxy) / n2;

  const double half_trace = 0.5 * (p.mu20 + p.mu02);
  const double half_diff = static_cast<double>(cxx - cyy) / (2.0 * n2);
  const double radius = std::hypot(half_diff, p.mu11);
  const double lambda1 = half_trace + radius;
  const double lambda2 = std::max(0.0, half_trace - radius);
  p.major_axis = 4.0 * std::sqrt(lambda1);
  p.minor_axis = 4.0 * std::sqrt(lambda2);

  // atan2 on exact integer numerators; an exact zero numerator is +0, so the
  // result lies in (-pi, pi] and halving lands in (-pi/2, pi/2].
  if (cxy == 0 && cxx == cyy) {
    p.orientation = 0.0;
  } else {
    p.orientation = 0.5 * std::atan2(static_cast<double>(2 * cxy),
                                     static_cast<double>(cxx - cyy));
  }
  return p;
}

}  // namespace

std::vector<Particle> measure(const LabelMap& lm, const GrayImage& src,
                              int iteration) {
  if (!same_shape(lm, src)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measure: label map and image differ in size");
  }
  const int w = lm.width(), h = lm.height();
  std::vector<Accumulator> acc(lm.count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = lm(x, y);
      if (l <= 0) continue;
      if (l > lm.count()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "measure: label exceeds label map count");
      }
      Accumulator& a = acc[l - 1];
      a.add(x, y, src(x, y));
      auto boundary = [&](int nx, int ny) {
        return !lm.contains(nx, ny) || lm(nx, ny) != l;
      };
      a.perimeter += boundary(x - 1, y) + boundary(x + 1, y) +
                     boundary(x, y - 1) + boundary(x, y + 1);
    }
  }

  std::vector<Particle> out;
  out.reserve(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i].n == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "measure: label " + std::to_string(i + 1) + " has no pixels");
    }
    out.push_back(finish(static_cast<int>(i + 1), acc[i], iteration));
  }
  return out;
}

void write_particles_csv(std::ostream& out,
                         const std::vector<Particle>& particles) {
  using detail::format_fixed6;
  out << kParticleCsvHeader << '\n';
  for (const auto& p : particles) {
    out << p.label << ',' << format_fixed6(p.centroid_x) << ','
        << format_fixed6(p.centroid_y) << ',' << p.area << ','
        << format_fixed6(p.major_axis) << ',' << format_fixed6(p.minor_axis)
        << ',' << p.perimeter << ',' << format_fixed6(p.mean_intensity) << ','
        << format_fixed6(p.orientation) << ',' << p.iteration << '\n';
  }
}

void to_csv(const std::vector<Particle>& particles,
            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  }
  write_particles_csv(out, particles);
  if (!out) throw Error(ErrorCode::kIo, "write error on " + path.string());
}

std::vector<Particle> read_particles_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kParticleCsvHeader) {
    throw Error(ErrorCode::kFormat,
                "line 1: expected particle CSV header '" +
                    std::string(kParticleCsvHeader) + "'");
  }
  std::vector<Particle> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto cols = detail::split(text, ',');
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kFormat,
                   "line " + std::to_string(line_no) + ": " + why);
    };
    if (cols.size() != 10) throw fail("expected 10 columns");
    auto real = [&](int c) {
      auto v = detail::parse_number<double>(cols[c]);
      if (!v || !std::isfinite(*v)) throw fail("bad number in column " + std::to_string(c + 1));
      return *v;
    };
    auto integer = [&](int c) {
      auto v = detail::parse_number<std::int64_t>(cols[c]);
      if (!v) throw fail("bad integer in column " + std::to_string(c + 1));
      return *v;
    };
    Particle p;
    p.label = static_cast<int>(integer(0));
    p.centroid_x = real(1);
    p.centroid_y = real(2);
    p.area = integer(3);
    p.major_axis = real(4);
    p.minor_axis = real(5);
    p.perimeter = integer(6);
    p.mean_intensity = real(7);
    p.orientation = real(8);
    p.iteration = static_cast<int>(integer(9));
    out.push_back(p);
  }
  return out;
}

std::vector<Particle> load_particles_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return read_particles_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace nanodetect
