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

#include <cstdint>
#include <functional>
#include <future>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "qcut/circuit.h"
#include "qcut/cutfind.h"
#include "qcut/observable.h"
#include "qcut/simulator.h"

namespace qcut {

enum class Family : uint8_t { GHZ, QFT, Brickwork, Random };
enum class Strategy : uint8_t { NoCut, Auto, Fitv3 };
enum class ObservableFamily : uint8_t { ZMagnetization, GhzStabilizers };

const char *family_name(Family f);
Family parse_family(std::string_view name);
const char *strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);
const char *observable_family_name(ObservableFamily f);
ObservableFamily parse_observable_family(std::string_view name);

struct SweepConfig {
    std::vector<Family> families = {Family::GHZ, Family::QFT, Family::Random};
    std::vector<uint32_t> widths = {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    std::vector<uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<Strategy> strategies = {Strategy::NoCut, Strategy::Auto, Strategy::Fitv3};
    uint64_t shots_per_subexperiment = 200;
    uint32_t reconstruction_samples = 100;
    /// Shots per measurement basis on the uncut path; 0 means
    /// shots_per_subexperiment * reconstruction_samples.
    uint64_t baseline_shots = 0;
    CutBudget budget;
    NoiseProfile noise;
    ObservableFamily observable_family = ObservableFamily::ZMagnetization;
    ScoreWeights weights;
    std::vector<PresetConfig> presets = default_presets();
    uint32_t brickwork_depth = 4;
    /// 0 means depth = width.
    uint32_t random_depth = 0;
    uint64_t master_seed = 0;
    uint32_t workers = 1;
    bool explain = false;

    void validate() const;
    uint64_t effective_baseline_shots() const;
};

struct RunRecord {
    Family family = Family::GHZ;
    uint32_t n_qubits = 0;
    uint64_t seed = 0;
    Strategy strategy = Strategy::NoCut;
    bool skipped = false;
    std::string skip_reason;
    std::optional<double> mae;
    uint32_t n_cuts = 0;
    double overhead_estimate = 1.0;
    uint64_t n_subexperiments = 0;
    uint64_t total_shots = 0;

    // Per-run detail; not part of the CSV.
    std::vector<std::string> observable_names;
    std::vector<double> estimates;
    std::vector<double> ideals;
    std::vector<double> per_observable_errors;
    std::vector<std::string> cut_locations;
    std::vector<std::vector<uint32_t>> partitions;
    std::vector<ScoredCandidate> candidates;
};

Circuit family_circuit(Family family, uint32_t n, uint64_t seed, const SweepConfig &cfg);
std::vector<Observable> family_observables(ObservableFamily family, uint32_t n);

/// Counts-based estimates on the full circuit: one execution per distinct
/// measurement basis, `shots` each.
struct UncutEstimate {
    std::vector<double> values;
    uint64_t total_shots = 0;
};
UncutEstimate estimate_uncut(const Circuit &c, std::span<const Observable> obs, const NoiseProfile &noise,
                             uint64_t shots, uint64_t seed);

/// Uncut results shared by every strategy of a cell; keyed by
/// (family, width, seed). Values do not depend on the strategy.
class UncutCache {
   public:
    using Key = std::tuple<Family, uint32_t, uint64_t>;
    /// The first caller for a key runs `compute`; concurrent callers wait
    /// for its result (or its exception).
    UncutEstimate get(const Key &key, const std::function<UncutEstimate()> &compute);

   private:
    std::mutex mu_;
    std::map<Key, std::shared_future<UncutEstimate>> entries_;
};

/// One sweep cell. Never throws; failures become skipped records.
RunRecord run_one(Family family, uint32_t n, uint64_t seed, Strategy strategy, const SweepConfig &cfg,
                  UncutCache *cache = nullptr);

double mae(std::span<const double> estimates, std::span<const double> ideals);
/// Mean of (method - baseline) MAE over pairs matched on (family, width, seed)
/// where neither side is skipped.
double delta_mae(std::span<const RunRecord> method_runs, std::span<const RunRecord> baseline_runs);
/// Fraction of matched pairs at width `n` where the method is strictly better.
double win_rate(std::span<const RunRecord> method_runs, std::span<const RunRecord> baseline_runs, uint32_t n);

/// All cells of the sweep in (family, width, seed, strategy) order.
std::vector<RunRecord> run_sweep(const SweepConfig &cfg);

/// Summary tables computed from the CSV-visible fields only.
nlohmann::ordered_json summarize(std::span<const RunRecord> records);

extern const char *const kCsvHeader;
void write_csv(std::ostream &out, std::span<const RunRecord> records);
std::string to_csv(std::span<const RunRecord> records);
/// Throws Parse naming the offending line.
std::vector<RunRecord> read_csv(std::istream &in);

nlohmann::ordered_json record_json(const RunRecord &r);
nlohmann::ordered_json candidate_json(const ScoredCandidate &c);
std::string record_file_name(const RunRecord &r);

}  // namespace qcut
