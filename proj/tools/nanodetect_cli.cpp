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

// Command-line front end. Talks to the library only through the C API.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nanodetect/nanodetect.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using ImageHandle = Handle<nd_image, nd_image_free>;
using DetectConfigHandle = Handle<nd_detect_config, nd_detect_config_free>;
using BatchHandle = Handle<nd_batch_report, nd_batch_report_free>;
using ParticlesHandle = Handle<nd_particles, nd_particles_free>;
using TruthHandle = Handle<nd_ground_truth, nd_ground_truth_free>;
using MatchHandle = Handle<nd_match_report, nd_match_report_free>;
using SynthConfigHandle = Handle<nd_synth_config, nd_synth_config_free>;

// Thrown to unwind to main with an exit code after printing a message.
struct Failure {
  int exit_code;
};

void check(nd_status s, const std::string& context) {
  if (s == ND_OK) return;
  std::cerr << "error: " << context << ": " << nd_last_error() << " ["
            << nd_status_name(s) << "]\n";
  throw Failure{kExitFatal};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_lines(const char* text) {
  json obj = json::object();
  std::string s(text);
  std::size_t start = 0;
  while (start < s.size()) {
    auto end = s.find('\n', start);
    if (end == std::string::npos) end = s.size();
    const std::string line = s.substr(start, end - start);
    const auto eq = line.find('=');
    if (eq != std::string::npos) obj[line.substr(0, eq)] = line.substr(eq + 1);
    start = end + 1;
  }
  return obj;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Failure{kExitFatal};
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << dir << ": " << ec.message() << "\n";
    throw Failure{kExitFatal};
  }
}

// ---- detect -------------------------------------------------------------------

struct DetectArgs {
  std::string input;
  std::string out;
  std::string config;
  std::optional<int> max_iterations;
  std::optional<int> min_area;
  std::optional<std::string> separation;
  int workers = 1;
  std::vector<std::string> set;
};

int run_detect(const DetectArgs& a) {
  const std::string started = utc_now();
  nd_detect_config* raw_cfg = nullptr;
  check(nd_detect_config_create(&raw_cfg), "create config");
  DetectConfigHandle cfg(raw_cfg);

  // Precedence: defaults < config file < flags.
  if (!a.config.empty()) check(nd_detect_config_load_file(cfg.get(), a.config.c_str()), "config");
  for (const auto& kv : a.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return kExitFatal;
    }
    check(nd_detect_config_set(cfg.get(), kv.substr(0, eq).c_str(),
                               kv.substr(eq + 1).c_str()),
          "--set");
  }
  if (a.max_iterations) {
    check(nd_detect_config_set(cfg.get(), "max_iterations",
                               std::to_string(*a.max_iterations).c_str()),
          "--max-iterations");
  }
  if (a.min_area) {
    check(nd_detect_config_set(cfg.get(), "min_area", std::to_string(*a.min_area).c_str()),
          "--min-area");
  }
  if (a.separation) {
    check(nd_detect_config_set(cfg.get(), "separation", a.separation->c_str()),
          "--separation");
  }
  check(nd_detect_config_validate(cfg.get()), "invalid config");
  ensure_dir(a.out);

  std::error_code ec;
  const bool is_dir = fs::is_directory(a.input, ec);
  if (!is_dir && !fs::is_regular_file(a.input, ec)) {
    std::cerr << "error: input not found: " << a.input << "\n";
    return kExitFatal;
  }

  nd_batch_report* raw_report = nullptr;
  if (is_dir) {
    check(nd_detect_batch(a.input.c_str(), cfg.get(), a.out.c_str(), a.workers, &raw_report),
          "detect");
  } else {
    check(nd_detect_file(a.input.c_str(), cfg.get(), a.out.c_str(), &raw_report), "detect");
  }
  BatchHandle report(raw_report);

  json inputs = json::array();
  for (std::size_t i = 0; i < nd_batch_report_size(report.get()); ++i) {
    const char* file = nd_batch_report_file(report.get(), i);
    inputs.push_back(file);
    if (nd_batch_report_ok(report.get(), i)) {
      std::cout << file << ": " << nd_batch_report_particles(report.get(), i)
                << " particles\n";
    } else {
      std::cerr << "skipped " << file << ": " << nd_batch_report_message(report.get(), i)
                << "\n";
    }
  }

  const std::size_t processed = nd_batch_report_processed(report.get());
  const std::size_t skipped = nd_batch_report_skipped(report.get());
  int exit_code = kExitOk;
  if (processed == 0) {
    std::cerr << "error: no processable images in " << a.input << "\n";
    exit_code = kExitFatal;
  } else if (skipped > 0) {
    exit_code = kExitPartial;
  }

  json manifest = {
      {"tool_version", nd_version()},
      {"command", "detect"},
      {"input", a.input},
      {"input_files", inputs},
      {"config_snapshot", config_lines(nd_detect_config_to_string(cfg.get()))},
      {"workers", a.workers},
      {"processed", processed},
      {"skipped", skipped},
      {"started", started},
      {"finished", utc_now()},
      {"exit_code", exit_code},
  };
  write_text(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");
  return exit_code;
}

// ---- eval ---------------------------------------------------------------------

int run_eval(const std::string& particles_csv, const std::string& gt_csv, double radius,
             const std::string& out) {
  nd_particles* raw_p = nullptr;
  check(nd_particles_load_csv(particles_csv.c_str(), &raw_p), "particles");
  ParticlesHandle particles(raw_p);
  nd_ground_truth* raw_gt = nullptr;
  check(nd_ground_truth_load_csv(gt_csv.c_str(), &raw_gt), "ground truth");
  TruthHandle gt(raw_gt);

  nd_match_report* raw_m = nullptr;
  check(nd_match(gt.get(), particles.get(), radius, &raw_m), "match");
  MatchHandle report(raw_m);

  const std::string summary = nd_match_report_summary(report.get());
  std::cout << summary;
  if (!out.empty()) {
    ensure_dir(out);
    write_text(fs::path(out) / "match_summary.txt", summary);
    check(nd_match_report_write_csv(report.get(), (fs::path(out) / "match.csv").c_str()),
          "write match report");
  }
  return kExitOk;
}

// ---- synth --------------------------------------------------------------------

int run_synth(const std::string& config, const std::string& out) {
  const std::string started = utc_now();
  nd_synth_config* raw_cfg = nullptr;
  check(nd_synth_config_create(&raw_cfg), "create config");
  SynthConfigHandle cfg(raw_cfg);
  check(nd_synth_config_load_file(cfg.get(), config.c_str()), "config");

  nd_image* raw_img = nullptr;
  nd_ground_truth* raw_gt = nullptr;
  check(nd_synth_generate(cfg.get(), &raw_img, &raw_gt), "generate");
  ImageHandle image(raw_img);
  TruthHandle truth(raw_gt);

  ensure_dir(out);
  const std::string name = fs::path(config).stem().string();
  const fs::path image_path = fs::path(out) / (name + ".pgm");
  const fs::path gt_path = fs::path(out) / (name + ".gt.csv");
  check(nd_image_write_pgm(image.get(), image_path.c_str()), "write image");
  check(nd_ground_truth_write_csv(truth.get(), gt_path.c_str()), "write ground truth");

  json manifest = {
      {"tool_version", nd_version()},
      {"command", "synth"},
      {"config_file", config},
      {"config_snapshot", config_lines(nd_synth_config_to_string(cfg.get()))},
      {"image", image_path.filename().string()},
      {"ground_truth", gt_path.filename().string()},
      {"particles", nd_ground_truth_count(truth.get())},
      {"started", started},
      {"finished", utc_now()},
      {"exit_code", kExitOk},
  };
  write_text(fs::path(out) / (name + ".manifest.json"), manifest.dump(2) + "\n");
  std::cout << "wrote " << image_path.string() << " with "
            << nd_ground_truth_count(truth.get()) << " particles\n";
  return kExitOk;
}

// ---- stats --------------------------------------------------------------------

int run_stats(const std::string& particles_csv, const std::string& out,
              const std::string& histogram_image) {
  nd_particles* raw_p = nullptr;
  check(nd_particles_load_csv(particles_csv.c_str(), &raw_p), "particles");
  ParticlesHandle particles(raw_p);
  ensure_dir(out);

  if (!histogram_image.empty()) {
    nd_image* raw_img = nullptr;
    check(nd_image_load_pgm(histogram_image.c_str(), &raw_img), "histogram image");
    ImageHandle img(raw_img);
    check(nd_image_write_histogram_csv(img.get(), (fs::path(out) / "histogram.csv").c_str()),
          "write histogram");
  }

  double r = 0.0;
  const fs::path pairs = fs::path(out) / "intensity_size.csv";
  const nd_status s = nd_intensity_size_report(particles.get(), pairs.c_str(), &r);
  if (s == ND_ERR_ZERO_VARIANCE) {
    std::cerr << "error: zero variance: " << nd_last_error() << "\n";
    return kExitFatal;
  }
  if (s == ND_ERR_TOO_FEW) {
    std::cerr << "error: too few particles: " << nd_last_error() << "\n";
    return kExitFatal;
  }
  check(s, "intensity/size correlation");

  char line[64];
  std::snprintf(line, sizeof line, "r=%.6f\n", r);
  std::cout << line;
  write_text(fs::path(out) / "pearson.txt", line);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nanoparticle detection in grayscale micrographs"};
  app.set_version_flag("--version", std::string(nd_version()));
  app.require_subcommand(1);

  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "Detect particles in a PGM file or directory");
  detect->add_option("input", detect_args.input, "PGM file or directory of PGM files")
      ->required();
  detect->add_option("--out", detect_args.out, "Output directory")->required();
  detect->add_option("--config", detect_args.config, "key=value config file");
  detect->add_option("--max-iterations", detect_args.max_iterations, "Iteration cap");
  detect->add_option("--min-area", detect_args.min_area, "Smallest kept particle, pixels");
  detect->add_option("--separation", detect_args.separation, "morphological or watershed")
      ->check(CLI::IsMember({"morphological", "watershed"}));
  detect->add_option("--workers", detect_args.workers, "Parallel images in batch mode")
      ->check(CLI::PositiveNumber);
  detect->add_option("--set", detect_args.set, "Override any config key (key=value)");

  std::string eval_particles, eval_gt, eval_out;
  double eval_radius = 10.0;
  auto* eval = app.add_subcommand("eval", "Match detections against ground-truth points");
  eval->add_option("particles", eval_particles, "Particle CSV")->required();
  eval->add_option("ground_truth", eval_gt, "Ground-truth CSV (x,y)")->required();
  eval->add_option("--radius", eval_radius, "Match radius in pixels")->capture_default_str();
  eval->add_option("--out", eval_out, "Output directory for the report");

  std::string synth_config, synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic image with ground truth");
  synth->add_option("--config", synth_config, "key=value synth config")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  std::string stats_particles, stats_out, stats_histogram;
  auto* stats = app.add_subcommand("stats", "Intensity/size correlation and histograms");
  stats->add_option("particles", stats_particles, "Particle CSV")->required();
  stats->add_option("--out", stats_out, "Output directory")->required();
  stats->add_option("--histogram", stats_histogram, "Also export this image's histogram");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*detect) return run_detect(detect_args);
    if (*eval) return run_eval(eval_particles, eval_gt, eval_radius, eval_out);
    if (*synth) return run_synth(synth_config, synth_out);
    if (*stats) return run_stats(stats_particles, stats_out, stats_histogram);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitFatal;
}
