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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcut/circuit.h"
#include "qcut/observable.h"
#include "qcut/qpd.h"

namespace qcut {

struct CutBudget {
    uint32_t max_cuts = 2;
    uint32_t q_max = 4;
    double overhead_cap = 1e8;

    /// Throws InvalidArgument unless q_max >= 2 and overhead_cap >= 1.
    void validate() const;
};

enum class Rejection : uint8_t { WidthViolation, OverheadExceeded, Disconnected };
const char *rejection_name(Rejection r);

struct ScoreWeights {
    double width = 1.0;
    double cuts = 1.0;
    double balance = 0.5;
    double subexperiments = 0.25;
};

struct ScoredCandidate {
    std::vector<CutLocation> locations;
    double score = 0.0;
    std::vector<std::vector<uint32_t>> partitions;
    double overhead = 1.0;
    uint64_t n_subexperiments = 1;
    bool feasible = true;
    std::optional<Rejection> rejection_reason;

    size_t max_width() const;
    size_t min_width() const;
};

struct StrategyOutcome {
    /// Absent for "run uncut" and for skips.
    std::optional<CutPlan> plan;
    bool skipped = false;
    std::optional<std::string> skip_reason;
    /// n_cuts, overhead, n_subexperiments, candidates_evaluated (the harness
    /// adds total_shots).
    std::map<std::string, double> diagnostics;
    /// Best candidates in selection order, at most kTopCandidates.
    std::vector<ScoredCandidate> top_candidates;
};

inline constexpr size_t kTopCandidates = 10;

/// Linear score over width headroom, cut count, imbalance and
/// log2(subexperiment count). `q_max` is the budget's width limit.
double score(const ScoredCandidate &candidate, uint32_t q_max, const ScoreWeights &weights);

/// Enumerates every set of at most `max_cuts` two-qubit gates whose removal
/// splits the interaction graph into more pieces than it already had, screens
/// by width and overhead, and keeps the best-scoring survivor. No survivor
/// yields an outcome without a plan (run uncut), never a skip.
StrategyOutcome fitv3_select(const Circuit &c, const std::vector<Observable> &obs, const CutBudget &budget,
                             const ScoreWeights &weights = {});

/// One local-search configuration of the automatic finder.
struct PresetConfig {
    uint32_t partitions = 2;
    uint32_t tolerance = 0;
    uint64_t seed = 0;
};

/// The six built-in presets: {2, 3} partitions x tolerance {0, 1, 2}.
std::vector<PresetConfig> default_presets();

/// Seeded balanced split refined by single moves and pairwise swaps that lower
/// the crossing-gate weight; every crossing gate is cut. Picks the feasible
/// candidate with fewest cuts, then lower overhead, then smaller max width.
/// Infeasible everywhere yields a skip carrying the rejection name.
StrategyOutcome auto_select(const Circuit &c, const CutBudget &budget, const std::vector<PresetConfig> &presets);

/// Width, then overhead, then separation. Separation needs the circuit; with
/// none given, a plan with cuts but fewer than two partitions is Disconnected.
std::optional<Rejection> feasibility_check(const CutPlan &plan, const CutBudget &budget,
                                           const Circuit *c = nullptr);

}  // namespace qcut
