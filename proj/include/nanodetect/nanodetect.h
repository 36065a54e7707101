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

/*
 * C interface to the nanodetect library.
 *
 * All objects are opaque handles created by a *_create / *_load / producing
 * call and released with the matching *_free (which accepts NULL). Every
 * fallible call returns an nd_status; on failure nd_last_error() describes
 * the problem for the calling thread until its next failing call.
 *
 * Strings returned as `const char*` are owned by the handle they came from
 * and stay valid until that handle is modified or freed.
 */
#ifndef NANODETECT_NANODETECT_H_
#define NANODETECT_NANODETECT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NANODETECT_BUILDING_LIBRARY)
#    define ND_API __declspec(dllexport)
#  else
#    define ND_API __declspec(dllimport)
#  endif
#else
#  define ND_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nd_status {
  ND_OK = 0,
  ND_ERR_INVALID_ARGUMENT = 1,
  ND_ERR_IO = 2,
  ND_ERR_FORMAT = 3,
  ND_ERR_DIMENSION = 4,
  ND_ERR_CONFIG = 5,
  ND_ERR_PLACEMENT = 6,
  ND_ERR_ZERO_VARIANCE = 7,
  ND_ERR_TOO_FEW = 8,
  ND_ERR_EMPTY_INPUT = 9,
  ND_ERR_INTERNAL = 99
} nd_status;

typedef struct nd_image nd_image;
typedef struct nd_detect_config nd_detect_config;
typedef struct nd_detect_result nd_detect_result;
typedef struct nd_batch_report nd_batch_report;
typedef struct nd_particles nd_particles;
typedef struct nd_ground_truth nd_ground_truth;
typedef struct nd_match_report nd_match_report;
typedef struct nd_synth_config nd_synth_config;

/* One particle record, as written to the particle CSV. */
typedef struct nd_particle {
  int32_t label;
  double x;
  double y;
  int64_t area;
  double major_axis;
  double minor_axis;
  int64_t perimeter;
  double mean_intensity;
  double orientation;
  int32_t iteration;
} nd_particle;

ND_API const char* nd_version(void);
ND_API const char* nd_last_error(void);
ND_API const char* nd_status_name(nd_status status);

/* ---- images -------------------------------------------------------------- */

ND_API nd_status nd_image_create(int width, int height, const uint8_t* pixels,
                                 nd_image** out);
ND_API nd_status nd_image_load_pgm(const char* path, nd_image** out);
ND_API nd_status nd_image_write_pgm(const nd_image* img, const char* path);
ND_API int nd_image_width(const nd_image* img);
ND_API int nd_image_height(const nd_image* img);
/* Row-major, width*height bytes. */
ND_API const uint8_t* nd_image_pixels(const nd_image* img);
/* "intensity,count" for all 256 levels. */
ND_API nd_status nd_image_write_histogram_csv(const nd_image* img, const char* path);
ND_API void nd_image_free(nd_image* img);

/* ---- detection configuration -------------------------------------------- */

ND_API nd_status nd_detect_config_create(nd_detect_config** out);
/* Sets one key; on error the config is unchanged. */
ND_API nd_status nd_detect_config_set(nd_detect_config* cfg, const char* key,
                                      const char* value);
/* Applies every key=value line of a file on top of the current values. */
ND_API nd_status nd_detect_config_load_file(nd_detect_config* cfg, const char* path);
/* Checks cross-field constraints (schedule lengths, ranges). */
ND_API nd_status nd_detect_config_validate(const nd_detect_config* cfg);
/* Canonical key=value text of every field. */
ND_API const char* nd_detect_config_to_string(nd_detect_config* cfg);
ND_API void nd_detect_config_free(nd_detect_config* cfg);

/* ---- single-image detection --------------------------------------------- */

ND_API nd_status nd_detect(const nd_image* img, const nd_detect_config* cfg,
                           nd_detect_result** out);
ND_API int nd_detect_result_iterations(const nd_detect_result* r);
ND_API int nd_detect_result_threshold(const nd_detect_result* r, int iteration_index);
ND_API int nd_detect_result_iteration_count(const nd_detect_result* r, int iteration_index);
ND_API const char* nd_detect_result_stop_reason(const nd_detect_result* r);
/* Borrowed; lives as long as the result. */
ND_API const nd_particles* nd_detect_result_particles(const nd_detect_result* r);
ND_API void nd_detect_result_free(nd_detect_result* r);

/* ---- batch detection ----------------------------------------------------- */

/* Processes every *.pgm in `dir` (lexicographic order), writing
 * "<stem>.particles.csv" per image and "summary.csv" into `out_dir`.
 * Unreadable images are recorded in the report, not returned as errors. */
ND_API nd_status nd_detect_batch(const char* dir, const nd_detect_config* cfg,
                                 const char* out_dir, int workers,
                                 nd_batch_report** out);
/* Single image with the same outputs as nd_detect_batch (one report entry). */
ND_API nd_status nd_detect_file(const char* image_path, const nd_detect_config* cfg,
                                const char* out_dir, nd_batch_report** out);
ND_API size_t nd_batch_report_size(const nd_batch_report* r);
ND_API size_t nd_batch_report_processed(const nd_batch_report* r);
ND_API size_t nd_batch_report_skipped(const nd_batch_report* r);
ND_API const char* nd_batch_report_file(const nd_batch_report* r, size_t i);
ND_API int nd_batch_report_ok(const nd_batch_report* r, size_t i);
ND_API const char* nd_batch_report_message(const nd_batch_report* r, size_t i);
ND_API size_t nd_batch_report_particles(const nd_batch_report* r, size_t i);
ND_API void nd_batch_report_free(nd_batch_report* r);

/* ---- particle tables ----------------------------------------------------- */

ND_API nd_status nd_particles_load_csv(const char* path, nd_particles** out);
ND_API nd_status nd_particles_write_csv(const nd_particles* p, const char* path);
ND_API size_t nd_particles_count(const nd_particles* p);
ND_API nd_status nd_particles_get(const nd_particles* p, size_t i, nd_particle* out);
ND_API void nd_particles_free(nd_particles* p);

/* Pearson r of mean intensity vs area; writes "mean_intensity,area" pairs to
 * `pairs_csv_path` when it is not NULL. */
ND_API nd_status nd_intensity_size_report(const nd_particles* p,
                                          const char* pairs_csv_path, double* r);
ND_API nd_status nd_pearson(const double* xs, const double* ys, size_t n, double* r);

/* ---- ground truth and matching ------------------------------------------ */

ND_API nd_status nd_ground_truth_load_csv(const char* path, nd_ground_truth** out);
ND_API nd_status nd_ground_truth_write_csv(const nd_ground_truth* gt, const char* path);
ND_API size_t nd_ground_truth_count(const nd_ground_truth* gt);
ND_API nd_status nd_ground_truth_point(const nd_ground_truth* gt, size_t i,
                                       double* x, double* y);
ND_API void nd_ground_truth_free(nd_ground_truth* gt);

ND_API nd_status nd_match(const nd_ground_truth* gt, const nd_particles* detections,
                          double radius, nd_match_report** out);
ND_API double nd_match_report_recall(const nd_match_report* r);
ND_API double nd_match_report_precision(const nd_match_report* r);
ND_API size_t nd_match_report_pair_count(const nd_match_report* r);
ND_API nd_status nd_match_report_pair(const nd_match_report* r, size_t i,
                                      int* gt_index, int* detection_index,
                                      double* distance);
ND_API size_t nd_match_report_unmatched_gt(const nd_match_report* r);
ND_API size_t nd_match_report_unmatched_detections(const nd_match_report* r);
/* Human-readable multi-line summary ("recall=...", "precision=...", ...). */
ND_API const char* nd_match_report_summary(const nd_match_report* r);
/* Pair and unmatched listing, "kind,gt_index,detection_index,distance". */
ND_API nd_status nd_match_report_write_csv(const nd_match_report* r, const char* path);
ND_API void nd_match_report_free(nd_match_report* r);

/* ---- synthetic images ---------------------------------------------------- */

ND_API nd_status nd_synth_config_create(nd_synth_config** out);
ND_API nd_status nd_synth_config_set(nd_synth_config* cfg, const char* key,
                                     const char* value);
ND_API nd_status nd_synth_config_load_file(nd_synth_config* cfg, const char* path);
ND_API const char* nd_synth_config_to_string(nd_synth_config* cfg);
ND_API void nd_synth_config_free(nd_synth_config* cfg);

/* Generates an image and its ground truth (disk centers). */
ND_API nd_status nd_synth_generate(const nd_synth_config* cfg, nd_image** image,
                                   nd_ground_truth** truth);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* NANODETECT_NANODETECT_H_ */
