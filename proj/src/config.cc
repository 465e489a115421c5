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

#include "qcut/config.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcut/error.h"

namespace qcut {

namespace {

std::string_view trim(std::string_view s) {
    const char *ws = " \t\r\n";
    size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        auto item = trim(text.substr(start, comma - start));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why = "") {
    std::string msg = "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'";
    if (!why.empty()) {
        msg += ": " + std::string(why);
    }
    throw QcutError(ErrorCode::Parse, msg);
}

uint64_t to_u64(std::string_view key, std::string_view text) {
    text = trim(text);
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        bad_value(key, text, "expected a non-negative integer");
    }
    return v;
}

uint32_t to_u32(std::string_view key, std::string_view text) {
    uint64_t v = to_u64(key, text);
    if (v > UINT32_MAX) {
        bad_value(key, text, "too large");
    }
    return static_cast<uint32_t>(v);
}

double to_double(std::string_view key, std::string_view text) {
    std::string s(trim(text));
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::logic_error &) {
        bad_value(key, text, "expected a number");
    }
    if (used != s.size()) {
        bad_value(key, text, "expected a number");
    }
    return v;
}

bool to_bool(std::string_view key, std::string_view text) {
    std::string s(trim(text));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s == "off") {
        return false;
    }
    bad_value(key, text, "expected true or false");
}

template <typename T, typename F>
std::vector<T> parse_names(std::string_view key, std::string_view value, F parse) {
    std::vector<T> out;
    for (const auto &item : split_list(value)) {
        try {
            out.push_back(parse(item));
        } catch (const QcutError &e) {
            bad_value(key, item, e.what());
        }
    }
    if (out.empty()) {
        bad_value(key, value, "empty list");
    }
    return out;
}

std::string join_ints(const auto &values) {
    std::string out;
    for (const auto &v : values) {
        if (!out.empty()) {
            out += ", ";
        }
        out += std::to_string(v);
    }
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::vector<uint64_t> parse_int_list(std::string_view text) {
    std::vector<uint64_t> out;
    for (const auto &item : split_list(text)) {
        std::string_view s = item;
        size_t dots = s.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(to_u64("list", s));
            continue;
        }
        uint64_t lo = to_u64("list", s.substr(0, dots));
        std::string_view rest = s.substr(dots + 2);
        uint64_t step = 1;
        size_t colon = rest.find(':');
        if (colon != std::string_view::npos) {
            step = to_u64("list", rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        uint64_t hi = to_u64("list", rest);
        if (step == 0 || hi < lo) {
            throw QcutError(ErrorCode::Parse, "bad range '" + item + "'");
        }
        for (uint64_t v = lo; v <= hi; v += step) {
            out.push_back(v);
        }
    }
    if (out.empty()) {
        throw QcutError(ErrorCode::Parse, "empty integer list");
    }
    return out;
}

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = {
        "families",
        "widths",
        "seeds",
        "strategies",
        "shots_per_subexperiment",
        "reconstruction_samples",
        "baseline_shots",
        "budget.max_cuts",
        "budget.q_max",
        "budget.overhead_cap",
        "noise.p1",
        "noise.p2",
        "noise.p_readout",
        "observable_family",
        "weights.width",
        "weights.cuts",
        "weights.balance",
        "weights.subexperiments",
        "presets",
        "brickwork_depth",
        "random_depth",
        "master_seed",
        "workers",
        "output_dir",
        "explain",
    };
    return keys;
}

void apply_config_value(CliConfig &cfg, std::string_view key, std::string_view value) {
    SweepConfig &s = cfg.sweep;
    value = trim(value);
    auto ints = [&] {
        try {
            return parse_int_list(value);
        } catch (const QcutError &e) {
            bad_value(key, value, e.what());
        }
    };
    if (key == "families") {
        s.families = parse_names<Family>(key, value, parse_family);
    } else if (key == "widths") {
        s.widths.clear();
        for (uint64_t w : ints()) {
            if (w > UINT32_MAX) {
                bad_value(key, value, "width too large");
            }
            s.widths.push_back(static_cast<uint32_t>(w));
        }
    } else if (key == "seeds") {
        s.seeds = ints();
    } else if (key == "strategies") {
        s.strategies = parse_names<Strategy>(key, value, parse_strategy);
    } else if (key == "shots_per_subexperiment") {
        s.shots_per_subexperiment = to_u64(key, value);
    } else if (key == "reconstruction_samples") {
        s.reconstruction_samples = to_u32(key, value);
    } else if (key == "baseline_shots") {
        s.baseline_shots = to_u64(key, value);
    } else if (key == "budget.max_cuts") {
        s.budget.max_cuts = to_u32(key, value);
    } else if (key == "budget.q_max") {
        s.budget.q_max = to_u32(key, value);
    } else if (key == "budget.overhead_cap") {
        s.budget.overhead_cap = to_double(key, value);
    } else if (key == "noise.p1") {
        s.noise.p1 = to_double(key, value);
    } else if (key == "noise.p2") {
        s.noise.p2 = to_double(key, value);
    } else if (key == "noise.p_readout") {
        s.noise.p_readout = to_double(key, value);
    } else if (key == "observable_family") {
        try {
            s.observable_family = parse_observable_family(value);
        } catch (const QcutError &e) {
            bad_value(key, value, e.what());
        }
    } else if (key == "weights.width") {
        s.weights.width = to_double(key, value);
    } else if (key == "weights.cuts") {
        s.weights.cuts = to_double(key, value);
    } else if (key == "weights.balance") {
        s.weights.balance = to_double(key, value);
    } else if (key == "weights.subexperiments") {
        s.weights.subexperiments = to_double(key, value);
    } else if (key == "presets") {
        // partitions:tolerance:seed, comma-separated
        s.presets.clear();
        for (const auto &item : split_list(value)) {
            size_t c1 = item.find(':');
            size_t c2 = c1 == std::string::npos ? c1 : item.find(':', c1 + 1);
            if (c2 == std::string::npos) {
                bad_value(key, item, "expected partitions:tolerance:seed");
            }
            PresetConfig p;
            p.partitions = to_u32(key, std::string_view(item).substr(0, c1));
            p.tolerance = to_u32(key, std::string_view(item).substr(c1 + 1, c2 - c1 - 1));
            p.seed = to_u64(key, std::string_view(item).substr(c2 + 1));
            s.presets.push_back(p);
        }
    } else if (key == "brickwork_depth") {
        s.brickwork_depth = to_u32(key, value);
    } else if (key == "random_depth") {
        s.random_depth = to_u32(key, value);
    } else if (key == "master_seed") {
        s.master_seed = to_u64(key, value);
    } else if (key == "workers") {
        s.workers = to_u32(key, value);
    } else if (key == "output_dir") {
        if (value.empty()) {
            bad_value(key, value, "empty path");
        }
        cfg.output_dir = std::string(value);
    } else if (key == "explain") {
        s.explain = to_bool(key, value);
    } else {
        throw QcutError(ErrorCode::Parse, "unknown config key '" + std::string(key) + "'");
    }
}

void parse_config(std::string_view text, CliConfig &cfg) {
    size_t line_no = 0;
    size_t start = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        line_no++;
        size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw QcutError(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const QcutError &e) {
            throw QcutError(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void load_config_file(const std::string &path, CliConfig &cfg) {
    std::ifstream in(path);
    if (!in) {
        throw QcutError(ErrorCode::Parse, "cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    parse_config(buf.str(), cfg);
}

std::string format_config(const CliConfig &cfg) {
    const SweepConfig &s = cfg.sweep;
    std::ostringstream out;
    auto names = [](const auto &values, auto name) {
        std::string line;
        for (const auto &v : values) {
            if (!line.empty()) {
                line += ", ";
            }
            line += name(v);
        }
        return line;
    };
    out << "families = " << names(s.families, family_name) << '\n';
    out << "widths = " << join_ints(s.widths) << '\n';
    out << "seeds = " << join_ints(s.seeds) << '\n';
    out << "strategies = " << names(s.strategies, strategy_name) << '\n';
    out << "shots_per_subexperiment = " << s.shots_per_subexperiment << '\n';
    out << "reconstruction_samples = " << s.reconstruction_samples << '\n';
    out << "baseline_shots = " << s.baseline_shots << '\n';
    out << "budget.max_cuts = " << s.budget.max_cuts << '\n';
    out << "budget.q_max = " << s.budget.q_max << '\n';
    out << "budget.overhead_cap = " << fmt(s.budget.overhead_cap) << '\n';
    out << "noise.p1 = " << fmt(s.noise.p1) << '\n';
    out << "noise.p2 = " << fmt(s.noise.p2) << '\n';
    out << "noise.p_readout = " << fmt(s.noise.p_readout) << '\n';
    out << "observable_family = " << observable_family_name(s.observable_family) << '\n';
    out << "weights.width = " << fmt(s.weights.width) << '\n';
    out << "weights.cuts = " << fmt(s.weights.cuts) << '\n';
    out << "weights.balance = " << fmt(s.weights.balance) << '\n';
    out << "weights.subexperiments = " << fmt(s.weights.subexperiments) << '\n';
    out << "presets = "
        << names(s.presets,
                 [](const PresetConfig &p) {
                     return std::to_string(p.partitions) + ":" + std::to_string(p.tolerance) + ":" +
                            std::to_string(p.seed);
                 })
        << '\n';
    out << "brickwork_depth = " << s.brickwork_depth << '\n';
    out << "random_depth = " << s.random_depth << '\n';
    out << "master_seed = " << s.master_seed << '\n';
    out << "workers = " << s.workers << '\n';
    out << "output_dir = " << cfg.output_dir << '\n';
    out << "explain = " << (s.explain ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace qcut
