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

#include "nanodetect/raster.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace nanodetect {

Histogram256 histogram(const GrayImage& img) {
  Histogram256 h;
  for (std::uint8_t v : img.pixels()) ++h.bins[v];
  h.total = img.size();
  return h;
}

GrayImage mask_to_image(const BinaryMask& mask) {
  GrayImage out(mask.width(), mask.height());
  std::transform(mask.pixels().begin(), mask.pixels().end(),
                 out.pixels().begin(),
                 [](std::uint8_t m) -> std::uint8_t { return m ? 255 : 0; });
  return out;
}

std::size_t count_foreground(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.pixels().begin(), mask.pixels().end(),
                    [](std::uint8_t m) { return m != 0; }));
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal integer.
  long next_int(const char* field) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !is_digit(bytes_[pos_])) {
      throw Error(ErrorCode::kFormat,
                  std::string("PGM header: expected integer for ") + field);
    }
    long v = 0;
    while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::kFormat,
                    std::string("PGM header: value too large for ") + field);
      }
      ++pos_;
    }
    return v;
  }

  char magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' ||
        (bytes_[1] != '2' && bytes_[1] != '5')) {
      throw Error(ErrorCode::kFormat, "not a PGM file (magic must be P2 or P5)");
    }
    pos_ = 2;
    return static_cast<char>(bytes_[1]);
  }

  // P5: exactly one whitespace byte separates maxval from the raster.
  void single_whitespace() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error(ErrorCode::kFormat,
                  "PGM header: missing whitespace before raster data");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  static bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  PgmReader reader(bytes);
  const char kind = reader.magic();
  const long width = reader.next_int("width");
  const long height = reader.next_int("height");
  const long maxval = reader.next_int("maxval");
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kFormat, "PGM header: width and height must be positive");
  }
  if (maxval <= 0) {
    throw Error(ErrorCode::kFormat, "PGM header: maxval must be positive");
  }
  if (maxval > 255) {
    throw Error(ErrorCode::kFormat,
                "PGM maxval " + std::to_string(maxval) +
                    " exceeds 255; only 8-bit images are supported");
  }

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> data(n);
  if (kind == '5') {
    reader.single_whitespace();
    auto raw = reader.rest();
    if (raw.size() < n) {
      throw Error(ErrorCode::kFormat,
                  "PGM raster truncated: expected " + std::to_string(n) +
                      " bytes, found " + std::to_string(raw.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (raw[i] > maxval) {
        throw Error(ErrorCode::kFormat, "PGM pixel exceeds declared maxval");
      }
      data[i] = raw[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      long v = 0;
      try {
        v = reader.next_int("pixel");
      } catch (const Error&) {
        throw Error(ErrorCode::kFormat,
                    "PGM raster truncated or malformed at pixel " +
                        std::to_string(i));
      }
      if (v > maxval) {
        throw Error(ErrorCode::kFormat, "PGM pixel exceeds declared maxval");
      }
      data[i] = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height),
                   std::move(data));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "read error on " + path.string());
  }
  try {
    return decode_pgm(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write error on " + path.string());
  }
}

}  // namespace nanodetect
