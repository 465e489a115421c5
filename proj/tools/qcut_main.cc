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

// qcut: run single cells, sweeps and reports from the command line.
//
// Exit codes: 0 success, 2 usage or configuration error, 1 internal failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "qcut/config.h"
#include "qcut/error.h"
#include "qcut/harness.h"

namespace {

using namespace qcut;
namespace fs = std::filesystem;

constexpr int kUsageError = 2;
constexpr int kInternalError = 1;

/// Thrown for bad user input that surfaced outside CLI11's own parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_usage_code(ErrorCode code) {
    return code == ErrorCode::Parse || code == ErrorCode::InvalidArgument || code == ErrorCode::InvalidWidth;
}

/// `--<config key> value` for every config key, applied after the config file.
struct Overrides {
    std::map<std::string, std::string> values;

    void attach(CLI::App *cmd) {
        for (const auto &key : config_keys()) {
            if (key == "explain") {
                continue;  // has its own flag
            }
            cmd->add_option("--" + key, values[key], "config override")->group("Config overrides");
        }
    }

    void apply(CLI::App *cmd, CliConfig &cfg) const {
        for (const auto &key : config_keys()) {
            if (key != "explain" && cmd->count("--" + key) > 0) {
                apply_config_value(cfg, key, values.at(key));
            }
        }
    }
};

CliConfig base_config(const std::string &config_path) {
    CliConfig cfg;
    if (const char *env = std::getenv("QCUT_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        cfg.output_dir = env;
    }
    if (!config_path.empty()) {
        load_config_file(config_path, cfg);
    }
    return cfg;
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_family_lines(const nlohmann::ordered_json &summary) {
    for (const auto &[family, per] : summary["family_mae"].items()) {
        for (const auto &[strategy, e] : per.items()) {
            std::string mean = e["mean"].is_null() ? "n/a" : std::to_string(e["mean"].get<double>());
            std::string median = e["median"].is_null() ? "n/a" : std::to_string(e["median"].get<double>());
            std::cout << family << ' ' << strategy << ": mean_mae=" << mean << " median_mae=" << median
                      << " runs=" << e["runs"] << " skipped=" << e["skipped"] << '\n';
        }
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qcut: circuit cutting engine and benchmark harness"};
    app.require_subcommand(1);

    // run
    auto *run = app.add_subcommand("run", "execute one (family, width, seed, strategy) cell; print its record as JSON");
    std::string run_family, run_strategy, run_config;
    uint32_t run_qubits = 0;
    uint64_t run_seed = 0;
    bool dump_circuit = false;
    bool run_explain = false;
    Overrides run_overrides;
    run->add_option("--family", run_family, "ghz, qft, brickwork or random")->required();
    run->add_option("--qubits", run_qubits, "circuit width")->required();
    run->add_option("--seed", run_seed, "instance seed")->required();
    run->add_option("--strategy", run_strategy, "no_cut, auto or fitv3")->required();
    run->add_option("--config", run_config, "config file");
    run->add_flag("--dump-circuit", dump_circuit, "print the circuit in text form and exit");
    run->add_flag("--explain", run_explain, "include the top scored cut candidates");
    run_overrides.attach(run);

    // sweep
    auto *sweep = app.add_subcommand("sweep", "run the full grid; write results.csv, summary.json and runs/*.json");
    std::string sweep_config, sweep_out;
    bool sweep_explain = false;
    Overrides sweep_overrides;
    sweep->add_option("--config", sweep_config, "config file");
    sweep->add_option("--out", sweep_out, "output directory (default: output_dir, or $QCUT_OUTPUT_DIR)");
    sweep->add_flag("--explain", sweep_explain, "include cut candidates in the per-run JSON");
    sweep_overrides.attach(sweep);

    // report
    auto *report = app.add_subcommand("report", "recompute the summary from a results CSV");
    std::string report_in, report_out;
    report->add_option("--in", report_in, "results CSV")->required();
    report->add_option("--out", report_out, "also write the summary JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (run->parsed()) {
            CliConfig cfg = base_config(run_config);
            run_overrides.apply(run, cfg);
            if (run_explain) {
                cfg.sweep.explain = true;
            }
            const Family family = parse_family(run_family);
            const Strategy strategy = parse_strategy(run_strategy);
            SweepConfig sc = cfg.sweep;
            sc.widths = {run_qubits};
            sc.seeds = {run_seed};
            sc.validate();
            if (dump_circuit) {
                std::cout << family_circuit(family, run_qubits, run_seed, sc).to_text();
                return 0;
            }
            const RunRecord r = run_one(family, run_qubits, run_seed, strategy, sc);
            std::cout << record_json(r).dump(2) << '\n';
            return 0;
        }

        if (sweep->parsed()) {
            CliConfig cfg = base_config(sweep_config);
            sweep_overrides.apply(sweep, cfg);
            if (sweep_explain) {
                cfg.sweep.explain = true;
            }
            if (!sweep_out.empty()) {
                cfg.output_dir = sweep_out;
            }
            cfg.sweep.validate();
            const fs::path out(cfg.output_dir);
            fs::create_directories(out / "runs");
            const auto records = run_sweep(cfg.sweep);
            write_file(out / "results.csv", to_csv(records));
            for (const auto &r : records) {
                write_file(out / "runs" / record_file_name(r), record_json(r).dump(2) + "\n");
            }
            const auto summary = summarize(records);
            write_file(out / "summary.json", summary.dump(2) + "\n");
            write_file(out / "config.txt", format_config(cfg));
            print_family_lines(summary);
            return 0;
        }

        if (report->parsed()) {
            std::istringstream in(read_file(report_in));
            const auto records = read_csv(in);
            const auto summary = summarize(records);
            if (!report_out.empty()) {
                write_file(report_out, summary.dump(2) + "\n");
            }
            std::cout << summary.dump(2) << '\n';
            return 0;
        }
    } catch (const QcutError &e) {
        std::cerr << "qcut: " << e.what() << '\n';
        return is_usage_code(e.code()) ? kUsageError : kInternalError;
    } catch (const UsageError &e) {
        std::cerr << "qcut: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception &e) {
        std::cerr << "qcut: internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kUsageError;
}
