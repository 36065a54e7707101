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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "nanodetect/pipeline.hpp"

namespace nanodetect {

namespace fs = std::filesystem;

std::size_t BatchReport::processed() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const BatchEntry& e) { return e.ok; }));
}

std::size_t BatchReport::skipped() const { return entries.size() - processed(); }

std::vector<fs::path> list_pgm_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a readable directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file(ec)) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::string particles_csv_name(const fs::path& image) {
  return image.stem().string() + ".particles.csv";
}

BatchEntry detect_file(const fs::path& image, const DetectConfig& cfg,
                       const fs::path& out_dir) {
  BatchEntry entry;
  entry.file = image.filename().string();
  try {
    const GrayImage img = load_pgm(image);
    const DetectResult r = detect(img, cfg);
    to_csv(r.particles, out_dir / particles_csv_name(image));
    entry.ok = true;
    entry.particles = r.particles.size();
    entry.iterations = r.iterations_run();
    entry.thresholds = r.thresholds_used;
  } catch (const Error& e) {
    // Config problems are fatal for the whole batch, not per-file.
    if (e.code() == ErrorCode::kConfig) throw;
    entry.message = e.what();
  }
  return entry;
}

void write_summary_csv(const BatchReport& report, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << kSummaryCsvHeader << '\n';
  for (const auto& e : report.entries) {
    if (!e.ok) continue;
    out << e.file << ',' << e.particles << ',' << e.iterations << ',';
    for (std::size_t i = 0; i < e.thresholds.size(); ++i) {
      if (i) out << ';';
      out << e.thresholds[i];
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write error on " + path.string());
}

BatchReport detect_batch(const fs::path& dir, const DetectConfig& cfg,
                         const fs::path& out_dir, int workers) {
  cfg.validate();
  const auto files = list_pgm_files(dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string());

  BatchReport report;
  report.entries.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      report.entries[i] = detect_file(files[i], cfg, out_dir);
    }
  };

  const int pool = std::clamp(workers, 1, std::max<int>(1, static_cast<int>(files.size())));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int k = 0; k < pool; ++k) {
      threads.emplace_back([&] {
        try {
          work();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    threads.clear();
    if (failure) std::rethrow_exception(failure);
  }

  write_summary_csv(report, out_dir / "summary.csv");
  return report;
}

BatchReport detect_single(const fs::path& image, const DetectConfig& cfg,
                          const fs::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string());
  BatchReport report;
  report.entries.push_back(detect_file(image, cfg, out_dir));
  write_summary_csv(report, out_dir / "summary.csv");
  return report;
}

}  // namespace nanodetect
