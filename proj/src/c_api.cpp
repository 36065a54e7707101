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

#include "nanodetect/nanodetect.h"

#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "nanodetect/config.hpp"
#include "nanodetect/evaluate.hpp"
#include "nanodetect/pipeline.hpp"
#include "nanodetect/synthgen.hpp"
#include "nanodetect/threshold.hpp"

namespace nd = nanodetect;

struct nd_image {
  nd::GrayImage img;
};
struct nd_detect_config {
  nd::DetectConfig cfg;
  std::string text;
};
struct nd_particles {
  std::vector<nd::Particle> items;
};
struct nd_detect_result {
  nd::DetectResult result;
  nd_particles particles;
};
struct nd_batch_report {
  nd::BatchReport report;
};
struct nd_ground_truth {
  nd::GroundTruth gt;
};
struct nd_match_report {
  nd::MatchReport report;
  std::string summary;
};
struct nd_synth_config {
  nd::SynthConfig cfg;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

nd_status to_status(nd::ErrorCode code) {
  switch (code) {
    case nd::ErrorCode::kInvalidArgument: return ND_ERR_INVALID_ARGUMENT;
    case nd::ErrorCode::kIo: return ND_ERR_IO;
    case nd::ErrorCode::kFormat: return ND_ERR_FORMAT;
    case nd::ErrorCode::kDimensionMismatch: return ND_ERR_DIMENSION;
    case nd::ErrorCode::kConfig: return ND_ERR_CONFIG;
    case nd::ErrorCode::kPlacement: return ND_ERR_PLACEMENT;
    case nd::ErrorCode::kZeroVariance: return ND_ERR_ZERO_VARIANCE;
    case nd::ErrorCode::kTooFewSamples: return ND_ERR_TOO_FEW;
    case nd::ErrorCode::kEmptyInput: return ND_ERR_EMPTY_INPUT;
  }
  return ND_ERR_INTERNAL;
}

nd_status fail(nd_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
nd_status guarded(F&& body) {
  try {
    body();
    return ND_OK;
  } catch (const nd::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ND_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ND_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ND_ERR_INTERNAL, "unknown error");
  }
}

#define ND_REQUIRE(cond, what)                                   \
  do {                                                           \
    if (!(cond)) return fail(ND_ERR_INVALID_ARGUMENT, (what));   \
  } while (0)

}  // namespace

extern "C" {

const char* nd_version(void) { return NANODETECT_VERSION; }

const char* nd_last_error(void) { return g_last_error.c_str(); }

const char* nd_status_name(nd_status status) {
  switch (status) {
    case ND_OK: return "ok";
    case ND_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ND_ERR_IO: return "io";
    case ND_ERR_FORMAT: return "format";
    case ND_ERR_DIMENSION: return "dimension_mismatch";
    case ND_ERR_CONFIG: return "config";
    case ND_ERR_PLACEMENT: return "placement";
    case ND_ERR_ZERO_VARIANCE: return "zero_variance";
    case ND_ERR_TOO_FEW: return "too_few_samples";
    case ND_ERR_EMPTY_INPUT: return "empty_input";
    case ND_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

// ---- images ----------------------------------------------------------------

nd_status nd_image_create(int width, int height, const uint8_t* pixels, nd_image** out) {
  ND_REQUIRE(out != nullptr, "nd_image_create: out is NULL");
  ND_REQUIRE(width > 0 && height > 0, "nd_image_create: dimensions must be positive");
  ND_REQUIRE(pixels != nullptr, "nd_image_create: pixels is NULL");
  return guarded([&] {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    *out = new nd_image{nd::GrayImage(width, height,
                                      std::vector<std::uint8_t>(pixels, pixels + n))};
  });
}

nd_status nd_image_load_pgm(const char* path, nd_image** out) {
  ND_REQUIRE(path && out, "nd_image_load_pgm: NULL argument");
  return guarded([&] { *out = new nd_image{nd::load_pgm(path)}; });
}

nd_status nd_image_write_pgm(const nd_image* img, const char* path) {
  ND_REQUIRE(img && path, "nd_image_write_pgm: NULL argument");
  return guarded([&] { nd::write_pgm(img->img, path); });
}

int nd_image_width(const nd_image* img) { return img ? img->img.width() : 0; }
int nd_image_height(const nd_image* img) { return img ? img->img.height() : 0; }

const uint8_t* nd_image_pixels(const nd_image* img) {
  return img ? img->img.pixels().data() : nullptr;
}

nd_status nd_image_write_histogram_csv(const nd_image* img, const char* path) {
  ND_REQUIRE(img && path, "nd_image_write_histogram_csv: NULL argument");
  return guarded([&] {
    const auto h = nd::histogram(img->img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw nd::Error(nd::ErrorCode::kIo, std::string("cannot open ") + path);
    out << "intensity,count\n";
    for (int v = 0; v < 256; ++v) out << v << ',' << h.bins[v] << '\n';
    if (!out) throw nd::Error(nd::ErrorCode::kIo, std::string("write error on ") + path);
  });
}

void nd_image_free(nd_image* img) { delete img; }

// ---- detection configuration -------------------------------------------------

nd_status nd_detect_config_create(nd_detect_config** out) {
  ND_REQUIRE(out, "nd_detect_config_create: out is NULL");
  return guarded([&] { *out = new nd_detect_config{}; });
}

nd_status nd_detect_config_set(nd_detect_config* cfg, const char* key, const char* value) {
  ND_REQUIRE(cfg && key && value, "nd_detect_config_set: NULL argument");
  return guarded([&] {
    nd::DetectConfig copy = cfg->cfg;
    nd::apply_detect_option(copy, key, value);
    cfg->cfg = std::move(copy);
  });
}

nd_status nd_detect_config_load_file(nd_detect_config* cfg, const char* path) {
  ND_REQUIRE(cfg && path, "nd_detect_config_load_file: NULL argument");
  return guarded([&] {
    nd::DetectConfig copy = cfg->cfg;
    nd::apply_detect_options(copy, nd::read_key_values_file(path));
    cfg->cfg = std::move(copy);
  });
}

nd_status nd_detect_config_validate(const nd_detect_config* cfg) {
  ND_REQUIRE(cfg, "nd_detect_config_validate: NULL argument");
  return guarded([&] { cfg->cfg.validate(); });
}

const char* nd_detect_config_to_string(nd_detect_config* cfg) {
  if (!cfg) return "";
  cfg->text = nd::serialize(cfg->cfg);
  return cfg->text.c_str();
}

void nd_detect_config_free(nd_detect_config* cfg) { delete cfg; }

// ---- detection ------------------------------------------------------------------

nd_status nd_detect(const nd_image* img, const nd_detect_config* cfg,
                    nd_detect_result** out) {
  ND_REQUIRE(img && cfg && out, "nd_detect: NULL argument");
  return guarded([&] {
    auto* r = new nd_detect_result{nd::detect(img->img, cfg->cfg), {}};
    r->particles.items = r->result.particles;
    *out = r;
  });
}

int nd_detect_result_iterations(const nd_detect_result* r) {
  return r ? r->result.iterations_run() : 0;
}

int nd_detect_result_threshold(const nd_detect_result* r, int i) {
  if (!r || i < 0 || i >= static_cast<int>(r->result.thresholds_used.size())) return -1;
  return r->result.thresholds_used[i];
}

int nd_detect_result_iteration_count(const nd_detect_result* r, int i) {
  if (!r || i < 0 || i >= r->result.iterations_run()) return -1;
  return r->result.per_iteration_counts[i];
}

const char* nd_detect_result_stop_reason(const nd_detect_result* r) {
  return r ? nd::to_string(r->result.stop_reason) : "";
}

const nd_particles* nd_detect_result_particles(const nd_detect_result* r) {
  return r ? &r->particles : nullptr;
}

void nd_detect_result_free(nd_detect_result* r) { delete r; }

// ---- batch ----------------------------------------------------------------------

nd_status nd_detect_batch(const char* dir, const nd_detect_config* cfg,
                          const char* out_dir, int workers, nd_batch_report** out) {
  ND_REQUIRE(dir && cfg && out_dir && out, "nd_detect_batch: NULL argument");
  return guarded([&] {
    *out = new nd_batch_report{nd::detect_batch(dir, cfg->cfg, out_dir, workers)};
  });
}

nd_status nd_detect_file(const char* image_path, const nd_detect_config* cfg,
                         const char* out_dir, nd_batch_report** out) {
  ND_REQUIRE(image_path && cfg && out_dir && out, "nd_detect_file: NULL argument");
  return guarded([&] {
    *out = new nd_batch_report{nd::detect_single(image_path, cfg->cfg, out_dir)};
  });
}

size_t nd_batch_report_size(const nd_batch_report* r) {
  return r ? r->report.entries.size() : 0;
}
size_t nd_batch_report_processed(const nd_batch_report* r) {
  return r ? r->report.processed() : 0;
}
size_t nd_batch_report_skipped(const nd_batch_report* r) {
  return r ? r->report.skipped() : 0;
}
const char* nd_batch_report_file(const nd_batch_report* r, size_t i) {
  return r && i < r->report.entries.size() ? r->report.entries[i].file.c_str() : "";
}
int nd_batch_report_ok(const nd_batch_report* r, size_t i) {
  return r && i < r->report.entries.size() && r->report.entries[i].ok ? 1 : 0;
}
const char* nd_batch_report_message(const nd_batch_report* r, size_t i) {
  return r && i < r->report.entries.size() ? r->report.entries[i].message.c_str() : "";
}
size_t nd_batch_report_particles(const nd_batch_report* r, size_t i) {
  return r && i < r->report.entries.size() ? r->report.entries[i].particles : 0;
}
void nd_batch_report_free(nd_batch_report* r) { delete r; }

// ---- particles ------------------------------------------------------------------

nd_status nd_particles_load_csv(const char* path, nd_particles** out) {
  ND_REQUIRE(path && out, "nd_particles_load_csv: NULL argument");
  return guarded([&] { *out = new nd_particles{nd::load_particles_csv(path)}; });
}

nd_status nd_particles_write_csv(const nd_particles* p, const char* path) {
  ND_REQUIRE(p && path, "nd_particles_write_csv: NULL argument");
  return guarded([&] { nd::to_csv(p->items, path); });
}

size_t nd_particles_count(const nd_particles* p) { return p ? p->items.size() : 0; }

nd_status nd_particles_get(const nd_particles* p, size_t i, nd_particle* out) {
  ND_REQUIRE(p && out, "nd_particles_get: NULL argument");
  ND_REQUIRE(i < p->items.size(), "nd_particles_get: index out of range");
  const auto& s = p->items[i];
  *out = nd_particle{s.label,          s.centroid_x, s.centroid_y, s.area,
                     s.major_axis,     s.minor_axis, s.perimeter,  s.mean_intensity,
                     s.orientation,    s.iteration};
  return ND_OK;
}

void nd_particles_free(nd_particles* p) { delete p; }

nd_status nd_intensity_size_report(const nd_particles* p, const char* pairs_csv_path,
                                   double* r) {
  ND_REQUIRE(p && r, "nd_intensity_size_report: NULL argument");
  return guarded([&] {
    const auto report = nd::intensity_size_report(p->items);
    if (pairs_csv_path) {
      std::ofstream out(pairs_csv_path, std::ios::binary | std::ios::trunc);
      out << report.pairs_csv;
      if (!out) {
        throw nd::Error(nd::ErrorCode::kIo, std::string("cannot write ") + pairs_csv_path);
      }
    }
    *r = report.r;
  });
}

nd_status nd_pearson(const double* xs, const double* ys, size_t n, double* r) {
  ND_REQUIRE(r && (n == 0 || (xs && ys)), "nd_pearson: NULL argument");
  return guarded([&] {
    *r = nd::pearson(std::span<const double>(xs, n), std::span<const double>(ys, n));
  });
}

// ---- ground truth and matching ------------------------------------------------

nd_status nd_ground_truth_load_csv(const char* path, nd_ground_truth** out) {
  ND_REQUIRE(path && out, "nd_ground_truth_load_csv: NULL argument");
  return guarded([&] { *out = new nd_ground_truth{nd::load_ground_truth(path)}; });
}

nd_status nd_ground_truth_write_csv(const nd_ground_truth* gt, const char* path) {
  ND_REQUIRE(gt && path, "nd_ground_truth_write_csv: NULL argument");
  return guarded([&] { nd::write_ground_truth(gt->gt, path); });
}

size_t nd_ground_truth_count(const nd_ground_truth* gt) {
  return gt ? gt->gt.points.size() : 0;
}

nd_status nd_ground_truth_point(const nd_ground_truth* gt, size_t i, double* x, double* y) {
  ND_REQUIRE(gt && x && y, "nd_ground_truth_point: NULL argument");
  ND_REQUIRE(i < gt->gt.points.size(), "nd_ground_truth_point: index out of range");
  *x = gt->gt.points[i].x;
  *y = gt->gt.points[i].y;
  return ND_OK;
}

void nd_ground_truth_free(nd_ground_truth* gt) { delete gt; }

nd_status nd_match(const nd_ground_truth* gt, const nd_particles* detections,
                   double radius, nd_match_report** out) {
  ND_REQUIRE(gt && detections && out, "nd_match: NULL argument");
  return guarded([&] {
    auto report = nd::match(gt->gt, detections->items, radius);
    auto summary = nd::format_report(report);
    *out = new nd_match_report{std::move(report), std::move(summary)};
  });
}

double nd_match_report_recall(const nd_match_report* r) { return r ? r->report.recall : 0.0; }
double nd_match_report_precision(const nd_match_report* r) {
  return r ? r->report.precision : 0.0;
}
size_t nd_match_report_pair_count(const nd_match_report* r) {
  return r ? r->report.pairs.size() : 0;
}

nd_status nd_match_report_pair(const nd_match_report* r, size_t i, int* gt_index,
                               int* detection_index, double* distance) {
  ND_REQUIRE(r && gt_index && detection_index && distance,
             "nd_match_report_pair: NULL argument");
  ND_REQUIRE(i < r->report.pairs.size(), "nd_match_report_pair: index out of range");
  const auto& p = r->report.pairs[i];
  *gt_index = p.gt_index;
  *detection_index = p.detection_index;
  *distance = p.distance;
  return ND_OK;
}

size_t nd_match_report_unmatched_gt(const nd_match_report* r) {
  return r ? r->report.unmatched_gt.size() : 0;
}
size_t nd_match_report_unmatched_detections(const nd_match_report* r) {
  return r ? r->report.unmatched_detections.size() : 0;
}
const char* nd_match_report_summary(const nd_match_report* r) {
  return r ? r->summary.c_str() : "";
}

nd_status nd_match_report_write_csv(const nd_match_report* r, const char* path) {
  ND_REQUIRE(r && path, "nd_match_report_write_csv: NULL argument");
  return guarded([&] { nd::write_match_csv(r->report, path); });
}

void nd_match_report_free(nd_match_report* r) { delete r; }

// ---- synthetic images -----------------------------------------------------------

nd_status nd_synth_config_create(nd_synth_config** out) {
  ND_REQUIRE(out, "nd_synth_config_create: out is NULL");
  return guarded([&] { *out = new nd_synth_config{}; });
}

nd_status nd_synth_config_set(nd_synth_config* cfg, const char* key, const char* value) {
  ND_REQUIRE(cfg && key && value, "nd_synth_config_set: NULL argument");
  return guarded([&] {
    nd::SynthConfig copy = cfg->cfg;
    nd::apply_synth_option(copy, key, value);
    cfg->cfg = copy;
  });
}

nd_status nd_synth_config_load_file(nd_synth_config* cfg, const char* path) {
  ND_REQUIRE(cfg && path, "nd_synth_config_load_file: NULL argument");
  return guarded([&] {
    nd::SynthConfig copy = cfg->cfg;
    nd::apply_synth_options(copy, nd::read_key_values_file(path));
    cfg->cfg = copy;
  });
}

const char* nd_synth_config_to_string(nd_synth_config* cfg) {
  if (!cfg) return "";
  cfg->text = nd::serialize(cfg->cfg);
  return cfg->text.c_str();
}

void nd_synth_config_free(nd_synth_config* cfg) { delete cfg; }

nd_status nd_synth_generate(const nd_synth_config* cfg, nd_image** image,
                            nd_ground_truth** truth) {
  ND_REQUIRE(cfg && image && truth, "nd_synth_generate: NULL argument");
  return guarded([&] {
    auto generated = nd::generate(cfg->cfg);
    auto gt = std::make_unique<nd_ground_truth>(
        nd_ground_truth{nd::truth_to_ground_truth(generated.truth)});
    *image = new nd_image{std::move(generated.image)};
    *truth = gt.release();
  });
}

}  // extern "C"
