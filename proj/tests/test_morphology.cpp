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

#include <random>

#include "doctest.h"
#include "nanodetect/morphology.hpp"
#include "oracles.hpp"

using namespace nanodetect;

namespace {

BinaryMask block(int w, int h, int x0, int y0, int bw, int bh) {
  BinaryMask m(w, h);
  for (int y = y0; y < y0 + bh; ++y)
    for (int x = x0; x < x0 + bw; ++x) m(x, y) = 1;
  return m;
}

}  // namespace

TEST_CASE("structuring element validation") {
  CHECK_THROWS_AS(StructuringElement({}, "empty"), Error);
  CHECK_THROWS_AS(StructuringElement({{1, 0}}, "no origin"), Error);
  CHECK(StructuringElement::square3().offsets().size() == 9);
  CHECK(StructuringElement::cross3().offsets().size() == 5);
  CHECK(StructuringElement::square3().symmetric());
  CHECK_FALSE(StructuringElement({{0, 0}, {1, 0}}, "half").symmetric());
  CHECK(StructuringElement::by_name("cross3").name() == "cross3");
  CHECK_THROWS_AS(StructuringElement::by_name("hexagon"), Error);
}

TEST_CASE("erode and dilate trivial cases") {
  const auto sq = StructuringElement::square3();
  const auto dot = block(5, 5, 2, 2, 1, 1);
  CHECK(count_foreground(erode(dot, sq)) == 0);
  CHECK(erode(block(5, 5, 1, 1, 3, 3), sq) == dot);
  CHECK(dilate(dot, sq) == block(5, 5, 1, 1, 3, 3));
  CHECK(dilate(BinaryMask(5, 5), sq) == BinaryMask(5, 5));
  CHECK(open(block(5, 5, 1, 1, 3, 3), sq) == block(5, 5, 1, 1, 3, 3));
  CHECK(count_foreground(open(dot, sq)) == 0);
  CHECK_THROWS_AS(erode(dot, sq, 0), Error);
  CHECK_THROWS_AS(dilate(dot, sq, -1), Error);
}

TEST_CASE("border counts as background") {
  const BinaryMask full(4, 4, 1);
  const auto e = erode(full, StructuringElement::square3());
  CHECK(e == block(4, 4, 1, 1, 2, 2));
}

TEST_CASE("erode and dilate equal naive oracle") {
  std::mt19937_64 rng(42);
  const std::vector<StructuringElement> ses{
      StructuringElement::square3(), StructuringElement::cross3(),
      StructuringElement({{0, 0}, {2, 0}, {0, -1}}, "asym")};
  for (int i = 0; i < 60; ++i) {
    const auto m = oracle::random_mask(rng, 7 + i % 20, 5 + i % 13, 0.3 + 0.01 * (i % 40));
    for (const auto& se : ses) {
      for (int it : {1, 2, 3}) {
        CHECK(erode(m, se, it) == oracle::naive_erode(m, se, it));
        CHECK(dilate(m, se, it) == oracle::naive_dilate(m, se, it));
      }
    }
  }
}

TEST_CASE("morphology properties on random masks") {
  std::mt19937_64 rng(43);
  for (const auto& se : {StructuringElement::square3(), StructuringElement::cross3()}) {
    for (int i = 0; i < 60; ++i) {
      const auto m = oracle::random_mask(rng, 20, 20, 0.55);
      CHECK(oracle::subset(open(m, se), m));
      CHECK(open(open(m, se), se) == open(m, se));

      // Closing and duality need a background margin so the frame does not clip.
      const int r = se.radius() * 2;
      const auto p = oracle::pad(m, r);
      CHECK(oracle::subset(p, close(p, se, 2)));
      const auto dual = oracle::complement(erode(oracle::complement(p), se));
      CHECK(oracle::crop(dual, r) == oracle::crop(dilate(p, se), r));

      auto bigger = m;
      auto extra = oracle::random_mask(rng, 20, 20, 0.2);
      for (std::size_t k = 0; k < bigger.size(); ++k) bigger[k] |= extra[k];
      CHECK(oracle::subset(erode(m, se), erode(bigger, se)));
      CHECK(oracle::subset(dilate(m, se), dilate(bigger, se)));
    }
  }
}
