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

#include "qcut/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "qcut/error.h"
#include "qcut/qpd.h"
#include "qcut/rng.h"

namespace qcut {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

const char *family_name(Family f) {
    switch (f) {
        case Family::GHZ:
            return "ghz";
        case Family::QFT:
            return "qft";
        case Family::Brickwork:
            return "brickwork";
        case Family::Random:
            return "random";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    const std::string s = lower(name);
    for (Family f : {Family::GHZ, Family::QFT, Family::Brickwork, Family::Random}) {
        if (s == family_name(f)) {
            return f;
        }
    }
    throw QcutError(ErrorCode::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

const char *strategy_name(Strategy s) {
    switch (s) {
        case Strategy::NoCut:
            return "no_cut";
        case Strategy::Auto:
            return "auto";
        case Strategy::Fitv3:
            return "fitv3";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    const std::string s = lower(name);
    for (Strategy st : {Strategy::NoCut, Strategy::Auto, Strategy::Fitv3}) {
        if (s == strategy_name(st)) {
            return st;
        }
    }
    throw QcutError(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

const char *observable_family_name(ObservableFamily f) {
    return f == ObservableFamily::ZMagnetization ? "z_magnetization" : "ghz_stabilizers";
}

ObservableFamily parse_observable_family(std::string_view name) {
    const std::string s = lower(name);
    if (s == "z_magnetization") {
        return ObservableFamily::ZMagnetization;
    }
    if (s == "ghz_stabilizers") {
        return ObservableFamily::GhzStabilizers;
    }
    throw QcutError(ErrorCode::InvalidArgument, "unknown observable family '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
    auto fail = [](const std::string &msg) { throw QcutError(ErrorCode::InvalidArgument, msg); };
    if (families.empty() || widths.empty() || seeds.empty() || strategies.empty()) {
        fail("families, widths, seeds and strategies must all be non-empty");
    }
    for (uint32_t w : widths) {
        if (w < 2 || w > 24) {
            fail("width " + std::to_string(w) + " is outside [2, 24]");
        }
    }
    if (shots_per_subexperiment == 0 || reconstruction_samples == 0 || workers == 0) {
        fail("shot, sample and worker counts must be positive");
    }
    if (brickwork_depth == 0) {
        fail("brickwork_depth must be positive");
    }
    budget.validate();
    noise.validate();
}

uint64_t SweepConfig::effective_baseline_shots() const {
    return baseline_shots != 0 ? baseline_shots : shots_per_subexperiment * reconstruction_samples;
}

Circuit family_circuit(Family family, uint32_t n, uint64_t seed, const SweepConfig &cfg) {
    switch (family) {
        case Family::GHZ:
            return ghz_circuit(n);
        case Family::QFT:
            return qft_circuit(n);
        case Family::Brickwork:
            return brickwork_circuit(n, cfg.brickwork_depth, seed);
        case Family::Random:
            return random_circuit(n, cfg.random_depth == 0 ? n : cfg.random_depth, seed);
    }
    throw QcutError(ErrorCode::InvalidArgument, "unknown family");
}

std::vector<Observable> family_observables(ObservableFamily family, uint32_t n) {
    if (family == ObservableFamily::ZMagnetization) {
        return {z_magnetization(n)};
    }
    return ghz_stabilizers(n);
}

UncutEstimate UncutCache::get(const Key &key, const std::function<UncutEstimate()> &compute) {
    std::promise<UncutEstimate> promise;
    std::shared_future<UncutEstimate> result;
    bool owner = false;
    {
        std::lock_guard lock(mu_);
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            result = promise.get_future().share();
            entries_.emplace(key, result);
            owner = true;
        } else {
            result = it->second;
        }
    }
    if (owner) {
        try {
            promise.set_value(compute());
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return result.get();
}

UncutEstimate estimate_uncut(const Circuit &c, std::span<const Observable> obs, const NoiseProfile &noise,
                             uint64_t shots, uint64_t seed) {
    const uint32_t n = c.num_qubits();
    // Counts per measurement basis (identity positions read in Z).
    std::map<std::string, Counts> by_basis;
    UncutEstimate out;
    for (const auto &o : obs) {
        for (const auto &term : o.terms()) {
            std::string key = term.paulis;
            std::replace(key.begin(), key.end(), 'I', 'Z');
            if (by_basis.count(key) != 0) {
                continue;
            }
            Circuit run = c;
            run.append(measurement_rotation(PauliString{key, 1.0}));
            for (uint32_t q = 0; q < n; q++) {
                run.append(Gate::measure(q));
            }
            by_basis.emplace(key, run_shots(run, noise, shots, derive_seed(seed, {hash_label(key)})));
            out.total_shots += shots;
        }
    }
    for (const auto &o : obs) {
        double value = 0;
        for (const auto &term : o.terms()) {
            std::string key = term.paulis;
            std::replace(key.begin(), key.end(), 'I', 'Z');
            Observable diag({PauliString{term.z_mapped(), term.coefficient}});
            value += expectation_from_counts(by_basis.at(key), diag);
        }
        out.values.push_back(value);
    }
    return out;
}

namespace {

void finish_record(RunRecord &r, const std::vector<double> &estimates) {
    r.estimates = estimates;
    r.per_observable_errors.clear();
    for (size_t i = 0; i < estimates.size(); i++) {
        r.per_observable_errors.push_back(std::abs(estimates[i] - r.ideals[i]));
    }
    r.mae = mae(r.estimates, r.ideals);
}

}  // namespace

RunRecord run_one(Family family, uint32_t n, uint64_t seed, Strategy strategy, const SweepConfig &cfg,
                  UncutCache *cache) {
    RunRecord r;
    r.family = family;
    r.n_qubits = n;
    r.seed = seed;
    r.strategy = strategy;
    const uint64_t fam_key = hash_label(family_name(family));
    try {
        const Circuit c = family_circuit(family, n, seed, cfg);
        const auto obs = family_observables(cfg.observable_family, n);
        const StateVector ideal_state = simulate_exact(c);
        for (const auto &o : obs) {
            r.observable_names.push_back(o.name());
            r.ideals.push_back(ideal_expectation(ideal_state, o));
        }

        std::optional<StrategyOutcome> outcome;
        if (strategy == Strategy::Fitv3) {
            outcome = fitv3_select(c, obs, cfg.budget, cfg.weights);
        } else if (strategy == Strategy::Auto) {
            outcome = auto_select(c, cfg.budget, cfg.presets);
        }
        if (outcome && cfg.explain) {
            r.candidates = outcome->top_candidates;
        }
        if (outcome && outcome->skipped) {
            r.skipped = true;
            r.skip_reason = outcome->skip_reason.value_or("skipped");
            return r;
        }

        if (!outcome || !outcome->plan) {
            // Uncut execution; keyed without the strategy so every strategy
            // that falls back here sees the same estimate.
            const UncutCache::Key key{family, n, seed};
            auto compute = [&] {
                const uint64_t s = derive_seed(cfg.master_seed, {hash_label("uncut"), fam_key, n, seed});
                return estimate_uncut(c, obs, cfg.noise, cfg.effective_baseline_shots(), s);
            };
            const UncutEstimate est = cache ? cache->get(key, compute) : compute();
            r.n_subexperiments = 1;
            r.total_shots = est.total_shots;
            finish_record(r, est.values);
            return r;
        }

        const CutPlan &plan = *outcome->plan;
        r.n_cuts = static_cast<uint32_t>(plan.locations.size());
        r.overhead_estimate = plan.overhead_estimate;
        r.n_subexperiments = plan.n_subexperiments;
        for (const auto &loc : plan.locations) {
            r.cut_locations.push_back(loc.str());
        }
        r.partitions = plan.partitions;
        const uint64_t strat_key = hash_label(strategy_name(strategy));
        const uint64_t select_seed = derive_seed(cfg.master_seed, {hash_label("select"), fam_key, n, seed, strat_key});
        const uint64_t exec_seed = derive_seed(cfg.master_seed, {hash_label("exec"), fam_key, n, seed, strat_key});
        const auto set =
            generate_subexperiments(c, plan, SampledMode{cfg.reconstruction_samples, select_seed}, cfg.budget.q_max);
        ShotEstimator estimator(cfg.noise, cfg.shots_per_subexperiment, exec_seed);
        const auto values = reconstruct_observables(set, obs, estimator);
        r.total_shots = estimator.total_shots();
        finish_record(r, values);
    } catch (const std::exception &e) {
        r.skipped = true;
        r.skip_reason = std::string("Error: ") + e.what();
        r.mae.reset();
        r.estimates.clear();
        r.per_observable_errors.clear();
    }
    return r;
}

double mae(std::span<const double> estimates, std::span<const double> ideals) {
    if (estimates.empty() || estimates.size() != ideals.size()) {
        throw QcutError(ErrorCode::Dimension, "mae needs equal, non-empty lists");
    }
    double total = 0;
    for (size_t i = 0; i < estimates.size(); i++) {
        total += std::abs(estimates[i] - ideals[i]);
    }
    return total / static_cast<double>(estimates.size());
}

namespace {

/// (method MAE, baseline MAE) for every matched, unskipped pair, optionally
/// restricted to one width.
std::vector<std::pair<double, double>> matched_pairs(std::span<const RunRecord> method,
                                                     std::span<const RunRecord> baseline,
                                                     std::optional<uint32_t> width) {
    std::map<std::tuple<Family, uint32_t, uint64_t>, double> base;
    for (const auto &r : baseline) {
        if (!r.skipped && r.mae) {
            base[{r.family, r.n_qubits, r.seed}] = *r.mae;
        }
    }
    std::vector<std::pair<double, double>> out;
    for (const auto &r : method) {
        if (r.skipped || !r.mae || (width && r.n_qubits != *width)) {
            continue;
        }
        auto it = base.find({r.family, r.n_qubits, r.seed});
        if (it != base.end()) {
            out.emplace_back(*r.mae, it->second);
        }
    }
    return out;
}

}  // namespace

double delta_mae(std::span<const RunRecord> method_runs, std::span<const RunRecord> baseline_runs) {
    auto pairs = matched_pairs(method_runs, baseline_runs, std::nullopt);
    if (pairs.empty()) {
        throw QcutError(ErrorCode::EmptyComparison, "no matched pairs");
    }
    double total = 0;
    for (auto [m, b] : pairs) {
        total += m - b;
    }
    return total / static_cast<double>(pairs.size());
}

double win_rate(std::span<const RunRecord> method_runs, std::span<const RunRecord> baseline_runs, uint32_t n) {
    auto pairs = matched_pairs(method_runs, baseline_runs, n);
    if (pairs.empty()) {
        throw QcutError(ErrorCode::EmptyComparison, "no matched pairs at width " + std::to_string(n));
    }
    size_t wins = 0;
    for (auto [m, b] : pairs) {
        wins += m < b ? 1 : 0;
    }
    return static_cast<double>(wins) / static_cast<double>(pairs.size());
}

std::vector<RunRecord> run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    struct Cell {
        Family family;
        uint32_t n;
        uint64_t seed;
        Strategy strategy;
    };
    std::vector<Cell> cells;
    for (Family f : cfg.families) {
        for (uint32_t n : cfg.widths) {
            for (uint64_t s : cfg.seeds) {
                for (Strategy st : cfg.strategies) {
                    cells.push_back({f, n, s, st});
                }
            }
        }
    }
    std::vector<RunRecord> records(cells.size());
    UncutCache cache;
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i = next++; i < cells.size(); i = next++) {
            const Cell &cell = cells[i];
            records[i] = run_one(cell.family, cell.n, cell.seed, cell.strategy, cfg, &cache);
        }
    };
    const size_t n_workers = std::min<size_t>(cfg.workers, cells.size());
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < n_workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return records;
}

namespace {

nlohmann::ordered_json no_pairs() {
    return {{"status", "no matched pairs"}};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

nlohmann::ordered_json summarize(std::span<const RunRecord> records) {
    using json = nlohmann::ordered_json;
    // First-appearance order of families and strategies; sorted widths.
    std::vector<Family> families;
    std::vector<Strategy> strategies;
    std::vector<uint32_t> widths;
    for (const auto &r : records) {
        if (std::find(families.begin(), families.end(), r.family) == families.end()) {
            families.push_back(r.family);
        }
        if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
            strategies.push_back(r.strategy);
        }
        if (std::find(widths.begin(), widths.end(), r.n_qubits) == widths.end()) {
            widths.push_back(r.n_qubits);
        }
    }
    std::sort(widths.begin(), widths.end());
    auto select = [&](auto pred) {
        std::vector<RunRecord> out;
        for (const auto &r : records) {
            if (pred(r)) {
                out.push_back(r);
            }
        }
        return out;
    };

    json summary;
    summary["records"] = records.size();
    summary["notes"] = {{"wire_cut_scaling", kWireScalingNote}};
    json fam_mae = json::object();
    for (Family f : families) {
        json per = json::object();
        for (Strategy s : strategies) {
            auto runs = select([&](const RunRecord &r) { return r.family == f && r.strategy == s; });
            std::vector<double> values;
            size_t skipped = 0;
            for (const auto &r : runs) {
                if (r.skipped || !r.mae) {
                    skipped++;
                } else {
                    values.push_back(*r.mae);
                }
            }
            json entry;
            if (values.empty()) {
                entry["mean"] = nullptr;
                entry["median"] = nullptr;
            } else {
                double total = 0;
                for (double v : values) {
                    total += v;
                }
                entry["mean"] = total / static_cast<double>(values.size());
                entry["median"] = median(values);
            }
            entry["runs"] = runs.size();
            entry["skipped"] = skipped;
            per[strategy_name(s)] = entry;
        }
        fam_mae[family_name(f)] = per;
    }
    summary["family_mae"] = fam_mae;

    const bool has_baseline = std::find(strategies.begin(), strategies.end(), Strategy::NoCut) != strategies.end();
    if (!has_baseline || strategies.size() < 2) {
        return summary;
    }
    json fam_delta = json::object();
    json delta_width = json::object();
    json win_width = json::object();
    for (Strategy s : strategies) {
        if (s == Strategy::NoCut) {
            continue;
        }
        json per_family = json::object();
        for (Family f : families) {
            auto method = select([&](const RunRecord &r) { return r.family == f && r.strategy == s; });
            auto base = select([&](const RunRecord &r) { return r.family == f && r.strategy == Strategy::NoCut; });
            auto pairs = matched_pairs(method, base, std::nullopt);
            per_family[family_name(f)] =
                pairs.empty() ? no_pairs() : json{{"delta_mae", delta_mae(method, base)}, {"pairs", pairs.size()}};
        }
        fam_delta[strategy_name(s)] = per_family;

        auto method = select([&](const RunRecord &r) { return r.strategy == s; });
        auto base = select([&](const RunRecord &r) { return r.strategy == Strategy::NoCut; });
        json dw = json::object();
        json ww = json::object();
        for (uint32_t n : widths) {
            auto at_n = [&](const std::vector<RunRecord> &v) {
                std::vector<RunRecord> out;
                for (const auto &r : v) {
                    if (r.n_qubits == n) {
                        out.push_back(r);
                    }
                }
                return out;
            };
            auto m_n = at_n(method);
            auto b_n = at_n(base);
            auto pairs = matched_pairs(m_n, b_n, n);
            const std::string key = std::to_string(n);
            if (pairs.empty()) {
                dw[key] = no_pairs();
                ww[key] = no_pairs();
            } else {
                dw[key] = json{{"delta_mae", delta_mae(m_n, b_n)}, {"pairs", pairs.size()}};
                ww[key] = json{{"win_rate", win_rate(m_n, b_n, n)}, {"pairs", pairs.size()}};
            }
        }
        delta_width[strategy_name(s)] = dw;
        win_width[strategy_name(s)] = ww;
    }
    summary["family_delta_mae"] = fam_delta;
    summary["delta_mae_by_width"] = delta_width;
    summary["win_rate_by_width"] = win_width;
    return summary;
}

const char *const kCsvHeader =
    "family,n_qubits,seed,strategy,skipped,skip_reason,mae,n_cuts,overhead_estimate,n_subexperiments,total_shots";

void write_csv(std::ostream &out, std::span<const RunRecord> records) {
    out << kCsvHeader << '\n';
    for (const auto &r : records) {
        std::string reason = r.skip_reason;
        std::replace_if(
            reason.begin(), reason.end(), [](char ch) { return ch == ',' || ch == '\n' || ch == '\r'; }, ';');
        out << family_name(r.family) << ',' << r.n_qubits << ',' << r.seed << ',' << strategy_name(r.strategy) << ','
            << (r.skipped ? 1 : 0) << ',' << reason << ',' << (r.mae ? format_double(*r.mae) : "") << ','
            << r.n_cuts << ',' << format_double(r.overhead_estimate) << ',' << r.n_subexperiments << ','
            << r.total_shots << '\n';
    }
}

std::string to_csv(std::span<const RunRecord> records) {
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

namespace {

template <typename T>
T parse_number(const std::string &field, const char *what, size_t line) {
    auto fail = [&] {
        throw QcutError(ErrorCode::Parse, "line " + std::to_string(line) + ": bad " + what + " '" + field + "'");
    };
    if (field.empty()) {
        fail();
    }
    size_t used = 0;
    T value{};
    try {
        if constexpr (std::is_same_v<T, double>) {
            value = std::stod(field, &used);
        } else {
            if (field[0] == '-') {
                fail();
            }
            value = static_cast<T>(std::stoull(field, &used));
        }
    } catch (const std::logic_error &) {
        fail();
    }
    if (used != field.size()) {
        fail();
    }
    return value;
}

}  // namespace

std::vector<RunRecord> read_csv(std::istream &in) {
    std::vector<RunRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw QcutError(ErrorCode::Parse, "line 1: unexpected header");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            f.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            f.emplace_back();
        }
        if (f.size() != 11) {
            throw QcutError(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected 11 fields, got " +
                                                  std::to_string(f.size()));
        }
        RunRecord r;
        try {
            r.family = parse_family(f[0]);
            r.strategy = parse_strategy(f[3]);
        } catch (const QcutError &e) {
            throw QcutError(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
        r.n_qubits = parse_number<uint32_t>(f[1], "n_qubits", line_no);
        r.seed = parse_number<uint64_t>(f[2], "seed", line_no);
        if (f[4] != "0" && f[4] != "1") {
            throw QcutError(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad skipped flag '" + f[4] + "'");
        }
        r.skipped = f[4] == "1";
        r.skip_reason = f[5];
        if (!f[6].empty()) {
            r.mae = parse_number<double>(f[6], "mae", line_no);
        }
        if (r.skipped == r.mae.has_value()) {
            throw QcutError(ErrorCode::Parse,
                            "line " + std::to_string(line_no) + ": mae must be present exactly when not skipped");
        }
        r.n_cuts = parse_number<uint32_t>(f[7], "n_cuts", line_no);
        r.overhead_estimate = parse_number<double>(f[8], "overhead_estimate", line_no);
        r.n_subexperiments = parse_number<uint64_t>(f[9], "n_subexperiments", line_no);
        r.total_shots = parse_number<uint64_t>(f[10], "total_shots", line_no);
        out.push_back(std::move(r));
    }
    if (line_no == 0) {
        throw QcutError(ErrorCode::Parse, "line 1: missing header");
    }
    return out;
}

nlohmann::ordered_json candidate_json(const ScoredCandidate &c) {
    nlohmann::ordered_json j;
    std::vector<std::string> locs;
    for (const auto &l : c.locations) {
        locs.push_back(l.str());
    }
    j["locations"] = locs;
    j["score"] = c.score;
    j["partitions"] = c.partitions;
    j["overhead"] = c.overhead;
    j["n_subexperiments"] = c.n_subexperiments;
    j["feasible"] = c.feasible;
    j["rejection_reason"] =
        c.rejection_reason ? nlohmann::ordered_json(rejection_name(*c.rejection_reason)) : nlohmann::ordered_json();
    return j;
}

nlohmann::ordered_json record_json(const RunRecord &r) {
    nlohmann::ordered_json j;
    j["family"] = family_name(r.family);
    j["n_qubits"] = r.n_qubits;
    j["seed"] = r.seed;
    j["strategy"] = strategy_name(r.strategy);
    j["skipped"] = r.skipped;
    j["skip_reason"] = r.skipped ? nlohmann::ordered_json(r.skip_reason) : nlohmann::ordered_json();
    j["mae"] = r.mae ? nlohmann::ordered_json(*r.mae) : nlohmann::ordered_json();
    j["n_cuts"] = r.n_cuts;
    j["overhead_estimate"] = r.overhead_estimate;
    j["n_subexperiments"] = r.n_subexperiments;
    j["total_shots"] = r.total_shots;
    j["cut_locations"] = r.cut_locations;
    j["partitions"] = r.partitions;
    auto observables = nlohmann::ordered_json::array();
    for (size_t i = 0; i < r.observable_names.size(); i++) {
        nlohmann::ordered_json o;
        o["name"] = r.observable_names[i];
        o["ideal"] = r.ideals[i];
        if (i < r.estimates.size()) {
            o["estimate"] = r.estimates[i];
            o["error"] = r.per_observable_errors[i];
        }
        observables.push_back(o);
    }
    j["observables"] = observables;
    j["per_observable_errors"] = r.per_observable_errors;
    if (!r.candidates.empty()) {
        auto cands = nlohmann::ordered_json::array();
        for (const auto &c : r.candidates) {
            cands.push_back(candidate_json(c));
        }
        j["candidates"] = cands;
    }
    return j;
}

std::string record_file_name(const RunRecord &r) {
    return std::string(family_name(r.family)) + "_" + std::to_string(r.n_qubits) + "_" + std::to_string(r.seed) +
           "_" + strategy_name(r.strategy) + ".json";
}

}  // namespace qcut
