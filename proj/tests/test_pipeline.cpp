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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nanodetect/evaluate.hpp"
#include "nanodetect/pipeline.hpp"
#include "nanodetect/synthgen.hpp"
#include "nanodetect/threshold.hpp"
#include "oracles.hpp"

using namespace nanodetect;
namespace fs = std::filesystem;

namespace {

GrayImage five_disks() {
  GrayImage img(96, 96, 30);
  const int centers[5][2] = {{15, 15}, {50, 18}, {80, 40}, {20, 70}, {60, 75}};
  for (const auto& c : centers)
    for (int y = 0; y < 96; ++y)
      for (int x = 0; x < 96; ++x)
        if ((x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]) <= 36) img(x, y) = 170;
  return img;
}

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("nd_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SynthConfig two_population(std::uint64_t seed) {
  SynthConfig sc;
  sc.width = sc.height = 256;
  sc.n_bright = 10;
  sc.n_faint = 6;
  sc.bright_range = {170, 170};
  sc.faint_range = {90, 90};
  sc.seed = seed;
  return sc;
}

}  // namespace

TEST_CASE("five bright disks are found in one pass") {
  const auto img = five_disks();
  const auto r = detect(img, DetectConfig{});
  CHECK(r.particles.size() == 5);
  CHECK(r.per_iteration_counts.front() == 5);
  const std::vector<Point> truth{{15, 15}, {50, 18}, {80, 40}, {20, 70}, {60, 75}};
  const auto rep = match(GroundTruth{truth, "manual"}, r.particles, 2.0);
  CHECK(rep.pairs.size() == 5);
  for (const auto& p : r.particles) CHECK(p.mean_intensity == 170.0);
}

TEST_CASE("constant image gives no particles") {
  const auto r = detect(GrayImage(32, 32, 128), DetectConfig{});
  CHECK(r.particles.empty());
  CHECK(r.iterations_run() == 1);
  CHECK(r.stop_reason == StopReason::kNoDetections);
  CHECK_THROWS_AS(detect(GrayImage(), DetectConfig{}), Error);
}

TEST_CASE("two populations need a second iteration") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = generate(two_population(seed));
    const auto gt = truth_to_ground_truth(s.truth);
    std::vector<Point> bright, faint;
    for (const auto& d : s.truth.particles)
      (d.population == Population::kBright ? bright : faint).push_back({d.cx, d.cy});

    DetectConfig one;
    one.max_iterations = 1;
    const auto r1 = detect(s.image, one);
    const auto r2 = detect(s.image, DetectConfig{});
    CHECK(match(GroundTruth{bright, ""}, r1.particles, 10).recall == 1.0);
    CHECK(match(GroundTruth{faint, ""}, r1.particles, 10).recall == 0.0);
    CHECK(match(GroundTruth{faint, ""}, r2.particles, 10).recall == 1.0);
    CHECK(r2.thresholds_used.size() >= 2);
    CHECK(match(gt, r2.particles, 10).precision == 1.0);
  }
}

TEST_CASE("pipeline invariants") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    auto sc = two_population(seed);
    sc.bright_range = {120, 186};
    sc.faint_range = {70, 110};
    const auto s = generate(sc);
    const auto r = detect(s.image, DetectConfig{});

    int sum = 0;
    for (int c : r.per_iteration_counts) sum += c;
    CHECK(sum == static_cast<int>(r.particles.size()));
    for (std::size_t i = 1; i < r.thresholds_used.size(); ++i)
      CHECK(r.thresholds_used[i] < r.thresholds_used[i - 1]);
    for (std::size_t i = 0; i < r.particles.size(); ++i) CHECK(r.particles[i].label == int(i) + 1);

    // Supports of different iterations never overlap.
    REQUIRE(r.iteration_labels.size() == r.per_iteration_counts.size());
    LabelMap seen(s.image.width(), s.image.height());
    for (const auto& lm : r.iteration_labels)
      for (std::size_t k = 0; k < lm.size(); ++k)
        if (lm[k]) {
          CHECK(seen[k] == 0);
          seen[k] = lm[k];
        }

    auto max_of = [](const GrayImage& g) {
      return *std::max_element(g.pixels().begin(), g.pixels().end());
    };
    CHECK(max_of(r.final_masked_image) <= max_of(s.image));

    // Same input, same output.
    const auto again = detect(s.image, DetectConfig{});
    std::ostringstream a, b;
    write_particles_csv(a, r.particles);
    write_particles_csv(b, again.particles);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("single iteration equals classic pipeline") {
  const auto s = generate(two_population(21));
  DetectConfig cfg;
  cfg.max_iterations = 1;
  const auto r = detect(s.image, cfg);
  const int t = otsu(histogram(s.image)).t;
  auto mask = apply_threshold(s.image, t);
  mask = dilate(erode(mask, cfg.se, 2), cfg.se, 2);
  const auto lm = filter_small(label_components(mask), cfg.min_area);
  const auto ps = measure(lm, s.image);
  REQUIRE(ps.size() == r.particles.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(ps[i].centroid_x == r.particles[i].centroid_x);
    CHECK(ps[i].area == r.particles[i].area);
  }
}

TEST_CASE("mask_out and rounded_mean") {
  const GrayImage img(3, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  CHECK(mask_out(img, LabelMap(3, 2), 99) == img);
  LabelMap all(3, 2, std::vector<std::int32_t>(6, 1), 1);
  CHECK(mask_out(img, all, 0) == GrayImage(3, 2, 0));
  CHECK(mask_out(img, all, 400) == GrayImage(3, 2, 255));
  CHECK_THROWS_AS(mask_out(img, LabelMap(2, 2), 0), Error);

  CHECK(rounded_mean(GrayImage(2, 1, std::vector<std::uint8_t>{1, 2})) == 2);  // 1.5 rounds up
  CHECK(rounded_mean(GrayImage(3, 1, std::vector<std::uint8_t>{1, 1, 2})) == 1);

  std::mt19937_64 rng(3);
  const auto g = oracle::random_mixture_image(rng, 20, 20);
  const auto lm = label_components(oracle::random_mask(rng, 20, 20, 0.3));
  const auto out = mask_out(g, lm, 77);
  std::size_t changed_or_fill = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (lm[k]) {
      CHECK(out[k] == 77);
      ++changed_or_fill;
    } else {
      CHECK(out[k] == g[k]);
    }
  }
  CHECK(changed_or_fill == count_foreground(support(lm)));
}

TEST_CASE("config validation names the field") {
  DetectConfig c;
  c.max_iterations = 4;
  try {
    c.validate();
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("erode_schedule") != std::string::npos);
  }
  DetectConfig inc;
  inc.erode_schedule = {1, 2, 2};
  CHECK_THROWS_AS(inc.validate(), Error);
  DetectConfig floor;
  floor.threshold_floor = 300;
  CHECK_THROWS_AS(floor.validate(), Error);
  DetectConfig fixed_short;
  fixed_short.threshold_mode = ThresholdMode::kFixedSequence;
  fixed_short.fixed_thresholds = {100};
  CHECK_THROWS_AS(fixed_short.validate(), Error);
  CHECK_THROWS_AS(detect(GrayImage(4, 4), fixed_short), Error);
}

TEST_CASE("fixed threshold sequence") {
  DetectConfig cfg;
  cfg.threshold_mode = ThresholdMode::kFixedSequence;
  cfg.fixed_thresholds = {117, 60, 40};
  cfg.min_contrast = 0;
  const auto r = detect(five_disks(), cfg);
  CHECK(r.thresholds_used.front() == 117);
  CHECK(r.per_iteration_counts.front() == 5);
}

TEST_CASE("watershed separation in the pipeline") {
  GrayImage img(60, 40, 30);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 60; ++x) {
      const int d1 = (x - 22) * (x - 22) + (y - 20) * (y - 20);
      const int d2 = (x - 34) * (x - 34) + (y - 20) * (y - 20);
      if (d1 <= 64 || d2 <= 64) img(x, y) = 170;
    }
  DetectConfig morph;
  morph.max_iterations = 1;
  CHECK(detect(img, morph).particles.size() == 1);
  DetectConfig ws = morph;
  ws.separation = Separation::kWatershed;
  CHECK(detect(img, ws).particles.size() == 2);
}

TEST_CASE("drop_border removes frame-touching particles") {
  GrayImage img(30, 30, 20);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) img(x, y) = 200;
  for (int y = 12; y < 18; ++y)
    for (int x = 12; x < 18; ++x) img(x, y) = 200;
  DetectConfig cfg;
  cfg.max_iterations = 1;
  CHECK(detect(img, cfg).particles.size() == 2);
  cfg.drop_border = true;
  CHECK(detect(img, cfg).particles.size() == 1);
}

TEST_CASE("batch equals per-image detect") {
  const auto in = fresh_dir("batch_in");
  const auto out1 = fresh_dir("batch_out1");
  const auto out4 = fresh_dir("batch_out4");
  const auto single = fresh_dir("batch_single");
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    write_pgm(generate(two_population(seed)).image, in / ("img" + std::to_string(seed) + ".pgm"));
  }
  {
    std::ofstream bad(in / "broken.PGM", std::ios::binary);
    bad << "P5 10 10 255\nshort";
  }
  std::ofstream(in / "notes.txt") << "ignored";

  const auto r1 = detect_batch(in, DetectConfig{}, out1, 1);
  const auto r4 = detect_batch(in, DetectConfig{}, out4, 4);
  REQUIRE(r1.entries.size() == 4);
  CHECK(r1.entries[0].file == "broken.PGM");
  CHECK_FALSE(r1.entries[0].ok);
  CHECK(r1.processed() == 3);
  CHECK(r1.skipped() == 1);
  CHECK(slurp(out1 / "summary.csv") == slurp(out4 / "summary.csv"));

  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const std::string stem = "img" + std::to_string(seed);
    const auto csv = stem + ".particles.csv";
    CHECK(slurp(out1 / csv) == slurp(out4 / csv));
    std::ostringstream direct;
    write_particles_csv(direct, detect(load_pgm(in / (stem + ".pgm")), DetectConfig{}).particles);
    CHECK(slurp(out1 / csv) == direct.str());
    const auto one = detect_single(in / (stem + ".pgm"), DetectConfig{}, single);
    CHECK(one.entries.size() == 1);
    CHECK(slurp(single / csv) == direct.str());
  }
  const auto summary = slurp(out1 / "summary.csv");
  CHECK(summary.rfind(std::string(kSummaryCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);

  const auto empty = fresh_dir("batch_empty");
  const auto re = detect_batch(empty, DetectConfig{}, fresh_dir("batch_empty_out"), 2);
  CHECK(re.entries.empty());
  CHECK_THROWS_AS(detect_batch(empty / "missing", DetectConfig{}, empty), Error);
}

TEST_CASE("threshold footprint covers the whole blob") {
  BinaryMask raw(10, 4);
  for (int x = 0; x < 6; ++x) raw(x, 1) = 1;
  raw(9, 3) = 1;
  LabelMap det(10, 4);
  det(2, 1) = 1;
  det.set_count(1);
  const auto fp = threshold_footprint(raw, det, Connectivity::kEight);
  for (int x = 0; x < 6; ++x) CHECK(fp(x, 1) != 0);
  CHECK(fp(9, 3) == 0);
  CHECK_THROWS_AS(threshold_footprint(BinaryMask(3, 3), det, Connectivity::kEight), Error);
}

TEST_CASE("noise-only image stops without detections") {
  // Single erosions, as in later iterations, let noise speckle through.
  DetectConfig gentle;
  gentle.erode_schedule = {1, 1, 1};
  SynthConfig sc;
  sc.n_bright = sc.n_faint = 0;
  for (double sigma : {2.0, 4.0, 8.0}) {
    sc.noise_sigma = sigma;
    const auto r = detect(generate(sc).image, gentle);
    CHECK(r.particles.empty());
    CHECK(r.stop_reason == StopReason::kLowContrast);
    CHECK(r.iterations_run() == 0);
  }
  DetectConfig off = gentle;
  off.min_contrast = 0;
  sc.noise_sigma = 4;
  CHECK(detect(generate(sc).image, off).particles.size() > 10);
}

TEST_CASE("low-contrast split is refined on the upper class") {
  // Few dim disks: the global Otsu split lands inside the background noise.
  SynthConfig sc;
  sc.width = sc.height = 512;
  sc.n_bright = 0;
  sc.n_faint = 4;
  sc.faint_range = {75, 75};
  sc.radius_range = {4, 4};
  sc.seed = 3;
  const auto s = generate(sc);
  const int plain = otsu(histogram(s.image)).t;
  CHECK(plain <= 32);
  const auto r = detect(s.image, DetectConfig{});
  REQUIRE_FALSE(r.thresholds_used.empty());
  CHECK(r.thresholds_used.front() > 40);
  CHECK(match(truth_to_ground_truth(s.truth), r.particles, 10).recall == 1.0);
  CHECK(r.particles.size() == 4);
}
