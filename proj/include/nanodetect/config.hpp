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

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nanodetect/pipeline.hpp"
#include "nanodetect/synthgen.hpp"

namespace nanodetect {

// Flat "key=value" configuration text. Blank lines and lines starting with
// '#' are ignored; lists are comma-separated ("erode_schedule=2,1,1").
// Keys mirror the DetectConfig / SynthConfig field names. Every failure is
// an Error(kConfig) whose message names the key (and line, for files).

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Throws with the line number on a line lacking '='.
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values_file(const std::filesystem::path& path);

void apply_detect_option(DetectConfig& cfg, std::string_view key,
                         std::string_view value);
void apply_synth_option(SynthConfig& cfg, std::string_view key,
                        std::string_view value);

/// Applies every pair in order; later keys win.
void apply_detect_options(DetectConfig& cfg, const KeyValues& kv);
void apply_synth_options(SynthConfig& cfg, const KeyValues& kv);

/// Canonical text listing every field; parsing it back onto a default config
/// reproduces `cfg`.
std::string serialize(const DetectConfig& cfg);
std::string serialize(const SynthConfig& cfg);

}  // namespace nanodetect
