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

#include "nanodetect/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace nanodetect {

namespace {

Error bad(std::string_view key, const std::string& why) {
  return Error(ErrorCode::kConfig, "config key '" + std::string(key) + "': " + why);
}

int to_int(std::string_view key, std::string_view value) {
  const auto v = detail::parse_number<long long>(value);
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
    throw bad(key, "expected an integer, got '" + std::string(value) + "'");
  }
  return static_cast<int>(*v);
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
  const auto v = detail::parse_number<std::uint64_t>(value);
  if (!v) throw bad(key, "expected an unsigned integer, got '" + std::string(value) + "'");
  return *v;
}

double to_real(std::string_view key, std::string_view value) {
  const auto v = detail::parse_number<double>(value);
  if (!v || !std::isfinite(*v)) {
    throw bad(key, "expected a number, got '" + std::string(value) + "'");
  }
  return *v;
}

std::vector<int> to_int_list(std::string_view key, std::string_view value) {
  std::vector<int> out;
  if (detail::trim(value).empty()) return out;
  for (auto part : detail::split(value, ',')) out.push_back(to_int(key, part));
  return out;
}

IntRange to_range(std::string_view key, std::string_view value) {
  const auto parts = to_int_list(key, value);
  if (parts.size() != 2) throw bad(key, "expected 'min,max'");
  return {parts[0], parts[1]};
}

bool to_bool(std::string_view key, std::string_view value) {
  const auto v = detail::trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw bad(key, "expected true or false, got '" + std::string(v) + "'");
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string exact_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = detail::trim(t.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kConfig,
                  "config line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::string(key), std::string(detail::trim(t.substr(eq + 1))));
  }
  return out;
}

KeyValues read_key_values_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_key_values(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void apply_detect_option(DetectConfig& cfg, std::string_view key,
                         std::string_view value) {
  value = detail::trim(value);
  if (key == "max_iterations") {
    cfg.max_iterations = to_int(key, value);
  } else if (key == "erode_schedule") {
    cfg.erode_schedule = to_int_list(key, value);
  } else if (key == "dilate_schedule") {
    if (value.empty()) cfg.dilate_schedule.reset();
    else cfg.dilate_schedule = to_int_list(key, value);
  } else if (key == "connectivity") {
    if (value == "four" || value == "4") cfg.connectivity = Connectivity::kFour;
    else if (value == "eight" || value == "8") cfg.connectivity = Connectivity::kEight;
    else throw bad(key, "expected four or eight");
  } else if (key == "min_area") {
    cfg.min_area = to_int(key, value);
  } else if (key == "se") {
    try {
      cfg.se = StructuringElement::by_name(std::string(value));
    } catch (const Error&) {
      throw bad(key, "expected square3 or cross3");
    }
  } else if (key == "threshold_mode") {
    if (value == "otsu" || value == "otsu_per_iteration") {
      cfg.threshold_mode = ThresholdMode::kOtsuPerIteration;
    } else if (value == "fixed" || value == "fixed_sequence") {
      cfg.threshold_mode = ThresholdMode::kFixedSequence;
    } else {
      throw bad(key, "expected otsu or fixed");
    }
  } else if (key == "fixed_thresholds") {
    cfg.fixed_thresholds = to_int_list(key, value);
  } else if (key == "threshold_floor") {
    cfg.threshold_floor = to_int(key, value);
  } else if (key == "min_contrast") {
    cfg.min_contrast = to_int(key, value);
  } else if (key == "separation") {
    if (value == "morphological") cfg.separation = Separation::kMorphological;
    else if (value == "watershed") cfg.separation = Separation::kWatershed;
    else throw bad(key, "expected morphological or watershed");
  } else if (key == "min_distance") {
    cfg.min_distance = to_real(key, value);
  } else if (key == "drop_border") {
    cfg.drop_border = to_bool(key, value);
  } else if (key == "mask_footprint") {
    cfg.mask_footprint = to_bool(key, value);
  } else {
    throw bad(key, "unknown key");
  }
}

void apply_synth_option(SynthConfig& cfg, std::string_view key,
                        std::string_view value) {
  value = detail::trim(value);
  if (key == "width") {
    cfg.width = to_int(key, value);
  } else if (key == "height") {
    cfg.height = to_int(key, value);
  } else if (key == "background_level") {
    cfg.background_level = to_int(key, value);
  } else if (key == "bright_range") {
    cfg.bright_range = to_range(key, value);
  } else if (key == "faint_range") {
    cfg.faint_range = to_range(key, value);
  } else if (key == "n_bright") {
    cfg.n_bright = to_int(key, value);
  } else if (key == "n_faint") {
    cfg.n_faint = to_int(key, value);
  } else if (key == "radius_range") {
    cfg.radius_range = to_range(key, value);
  } else if (key == "min_separation") {
    if (value.empty() || value == "auto") cfg.min_separation.reset();
    else cfg.min_separation = to_real(key, value);
  } else if (key == "noise_sigma") {
    cfg.noise_sigma = to_real(key, value);
  } else if (key == "blur") {
    if (value == "none") cfg.blur = Blur::kNone;
    else if (value == "box3") cfg.blur = Blur::kBox3;
    else throw bad(key, "expected none or box3");
  } else if (key == "seed") {
    cfg.seed = to_u64(key, value);
  } else {
    throw bad(key, "unknown key");
  }
}

void apply_detect_options(DetectConfig& cfg, const KeyValues& kv) {
  for (const auto& [k, v] : kv) apply_detect_option(cfg, k, v);
}

void apply_synth_options(SynthConfig& cfg, const KeyValues& kv) {
  for (const auto& [k, v] : kv) apply_synth_option(cfg, k, v);
}

std::string serialize(const DetectConfig& cfg) {
  std::ostringstream out;
  out << "max_iterations=" << cfg.max_iterations << '\n'
      << "erode_schedule=" << join(cfg.erode_schedule) << '\n'
      << "dilate_schedule="
      << (cfg.dilate_schedule ? join(*cfg.dilate_schedule) : std::string()) << '\n'
      << "connectivity="
      << (cfg.connectivity == Connectivity::kFour ? "four" : "eight") << '\n'
      << "min_area=" << cfg.min_area << '\n'
      << "se=" << cfg.se.name() << '\n'
      << "threshold_mode="
      << (cfg.threshold_mode == ThresholdMode::kOtsuPerIteration ? "otsu" : "fixed")
      << '\n'
      << "fixed_thresholds=" << join(cfg.fixed_thresholds) << '\n'
      << "threshold_floor=" << cfg.threshold_floor << '\n'
      << "min_contrast=" << cfg.min_contrast << '\n'
      << "separation="
      << (cfg.separation == Separation::kWatershed ? "watershed" : "morphological")
      << '\n'
      << "min_distance=" << exact_real(cfg.min_distance) << '\n'
      << "drop_border=" << (cfg.drop_border ? "true" : "false") << '\n'
      << "mask_footprint=" << (cfg.mask_footprint ? "true" : "false") << '\n';
  return out.str();
}

std::string serialize(const SynthConfig& cfg) {
  std::ostringstream out;
  out << "width=" << cfg.width << '\n'
      << "height=" << cfg.height << '\n'
      << "background_level=" << cfg.background_level << '\n'
      << "bright_range=" << cfg.bright_range.min << ',' << cfg.bright_range.max << '\n'
      << "faint_range=" << cfg.faint_range.min << ',' << cfg.faint_range.max << '\n'
      << "n_bright=" << cfg.n_bright << '\n'
      << "n_faint=" << cfg.n_faint << '\n'
      << "radius_range=" << cfg.radius_range.min << ',' << cfg.radius_range.max << '\n'
      << "min_separation="
      << (cfg.min_separation ? exact_real(*cfg.min_separation) : std::string("auto"))
      << '\n'
      << "noise_sigma=" << exact_real(cfg.noise_sigma) << '\n'
      << "blur=" << (cfg.blur == Blur::kBox3 ? "box3" : "none") << '\n'
      << "seed=" << cfg.seed << '\n';
  return out.str();
}

}  // namespace nanodetect
