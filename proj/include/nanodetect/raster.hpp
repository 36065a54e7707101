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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nanodetect/error.hpp"

namespace nanodetect {

/// Row-major 2-D grid. `x` is the column, `y` the row, origin top-left.
/// The tag parameter keeps grayscale images and binary masks distinct types
/// even though both store bytes.
template <typename Pixel, typename Tag>
class Raster {
 public:
  using value_type = Pixel;

  Raster() = default;

  Raster(int width, int height, Pixel fill = Pixel{})
      : width_(checked_dim(width)), height_(checked_dim(height)),
        data_(static_cast<std::size_t>(width_) * height_, fill) {}

  Raster(int width, int height, std::vector<Pixel> data)
      : width_(checked_dim(width)), height_(checked_dim(height)),
        data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * height_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "raster data length does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  Pixel& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const Pixel& operator()(int x, int y) const noexcept {
    return data_[index(x, y)];
  }

  Pixel& operator[](std::size_t i) noexcept { return data_[i]; }
  const Pixel& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<Pixel> pixels() noexcept { return data_; }
  std::span<const Pixel> pixels() const noexcept { return data_; }

  std::span<Pixel> row(int y) noexcept {
    return std::span<Pixel>(data_).subspan(index(0, y), width_);
  }
  std::span<const Pixel> row(int y) const noexcept {
    return std::span<const Pixel>(data_).subspan(index(0, y), width_);
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static int checked_dim(int v) {
    if (v < 0) {
      throw Error(ErrorCode::kInvalidArgument, "raster dimension is negative");
    }
    return v;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Pixel> data_;
};

struct GrayTag;
struct MaskTag;
struct LabelTag;

/// 8-bit single-channel intensities, 0 = black, 255 = white.
using GrayImage = Raster<std::uint8_t, GrayTag>;

/// Foreground mask holding only 0 and 1.
using BinaryMask = Raster<std::uint8_t, MaskTag>;

/// Component labels, 0 = background, 1..count otherwise.
class LabelMap : public Raster<std::int32_t, LabelTag> {
 public:
  LabelMap() = default;
  LabelMap(int width, int height) : Raster(width, height, 0) {}
  LabelMap(int width, int height, std::vector<std::int32_t> data, int count)
      : Raster(width, height, std::move(data)), count_(count) {}

  int count() const noexcept { return count_; }
  void set_count(int count) noexcept { count_ = count; }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int count_ = 0;
};

template <typename A, typename B>
bool same_shape(const A& a, const B& b) noexcept {
  return a.width() == b.width() && a.height() == b.height();
}

struct Histogram256 {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;
};

Histogram256 histogram(const GrayImage& img);

/// 0 -> 0, 1 -> 255.
GrayImage mask_to_image(const BinaryMask& mask);

/// Number of foreground pixels.
std::size_t count_foreground(const BinaryMask& mask);

/// Reads binary (P5) or ASCII (P2) PGM with maxval <= 255. Header comments
/// are skipped. Deeper bit depths are rejected rather than rescaled.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

/// Writes P5 with the header "P5\n<w> <h>\n255\n".
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

}  // namespace nanodetect
