// Copyright 2026 The qcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qcut/harness.h"

namespace qcut {

/// Everything a config file can set: the sweep plus where results go.
struct CliConfig {
    SweepConfig sweep;
    std::string output_dir = "qcut_out";
};

/// Keys accepted by `apply_config_value`, in documentation order.
const std::vector<std::string> &config_keys();

/// Sets one dotted key (e.g. `noise.p2`). Unknown keys and malformed values
/// throw Parse naming the key.
void apply_config_value(CliConfig &cfg, std::string_view key, std::string_view value);

/// Flat `key = value` lines; `#` starts a comment. Errors name the line.
void parse_config(std::string_view text, CliConfig &cfg);
void load_config_file(const std::string &path, CliConfig &cfg);

/// Integer list: comma-separated items, each `v`, `lo..hi` or `lo..hi:step`.
std::vector<uint64_t> parse_int_list(std::string_view text);

/// The config as `key = value` lines that `parse_config` reads back.
std::string format_config(const CliConfig &cfg);

}  // namespace qcut
