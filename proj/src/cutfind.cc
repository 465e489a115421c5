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

#include "qcut/cutfind.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcut/error.h"
#include "qcut/rng.h"

namespace qcut {

void CutBudget::validate() const {
    if (q_max < 2) {
        throw QcutError(ErrorCode::InvalidArgument, "q_max must be at least 2");
    }
    if (!(overhead_cap >= 1.0)) {
        throw QcutError(ErrorCode::InvalidArgument, "overhead_cap must be at least 1");
    }
}

const char *rejection_name(Rejection r) {
    switch (r) {
        case Rejection::WidthViolation:
            return "WidthViolation";
        case Rejection::OverheadExceeded:
            return "OverheadExceeded";
        case Rejection::Disconnected:
            return "Disconnected";
    }
    return "?";
}

size_t ScoredCandidate::max_width() const {
    size_t w = 0;
    for (const auto &p : partitions) {
        w = std::max(w, p.size());
    }
    return w;
}

size_t ScoredCandidate::min_width() const {
    size_t w = partitions.empty() ? 0 : partitions.front().size();
    for (const auto &p : partitions) {
        w = std::min(w, p.size());
    }
    return w;
}

double score(const ScoredCandidate &candidate, uint32_t q_max, const ScoreWeights &weights) {
    const double max_w = static_cast<double>(candidate.max_width());
    const double min_w = static_cast<double>(candidate.min_width());
    return weights.width * (static_cast<double>(q_max) - max_w) -
           weights.cuts * static_cast<double>(candidate.locations.size()) - weights.balance * (max_w - min_w) -
           weights.subexperiments * std::log2(static_cast<double>(candidate.n_subexperiments));
}

std::optional<Rejection> feasibility_check(const CutPlan &plan, const CutBudget &budget, const Circuit *c) {
    if (plan.max_width() > budget.q_max) {
        return Rejection::WidthViolation;
    }
    if (plan.overhead_estimate > budget.overhead_cap) {
        return Rejection::OverheadExceeded;
    }
    if (plan.locations.empty()) {
        return std::nullopt;
    }
    if (plan.partitions.size() < 2) {
        return Rejection::Disconnected;
    }
    if (c != nullptr) {
        std::vector<int64_t> part_of;
        for (size_t p = 0; p < plan.partitions.size(); p++) {
            for (uint32_t q : plan.partitions[p]) {
                if (q >= part_of.size()) {
                    part_of.resize(q + 1, -1);
                }
                part_of[q] = static_cast<int64_t>(p);
            }
        }
        for (const auto &comp : cut_components(*c, plan.locations)) {
            for (uint32_t q : comp) {
                if (q >= part_of.size() || part_of[q] != part_of[comp.front()] || part_of[q] < 0) {
                    return Rejection::Disconnected;
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

std::vector<size_t> gate_indices(const std::vector<CutLocation> &locations) {
    std::vector<size_t> out;
    for (const auto &loc : locations) {
        out.push_back(loc.gate_index);
    }
    return out;
}

/// fitv3 order: higher score, fewer cuts, lower overhead, smaller gate tuple.
bool fitv3_before(const ScoredCandidate &a, const ScoredCandidate &b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    if (a.locations.size() != b.locations.size()) {
        return a.locations.size() < b.locations.size();
    }
    if (a.overhead != b.overhead) {
        return a.overhead < b.overhead;
    }
    return gate_indices(a.locations) < gate_indices(b.locations);
}

struct Edge {
    uint32_t a;
    uint32_t b;
    uint32_t multiplicity;
};

uint32_t find_root(std::vector<uint32_t> &parent, uint32_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

/// Components of the interaction graph with `removed[e]` gates taken off edge e.
std::vector<std::vector<uint32_t>> components(uint32_t n, const std::vector<Edge> &edges,
                                              const std::vector<uint32_t> &removed) {
    std::vector<uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    for (size_t e = 0; e < edges.size(); e++) {
        if (edges[e].multiplicity > removed[e]) {
            uint32_t ra = find_root(parent, edges[e].a);
            uint32_t rb = find_root(parent, edges[e].b);
            if (ra != rb) {
                parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::vector<std::vector<uint32_t>> by_root(n);
    for (uint32_t q = 0; q < n; q++) {
        by_root[find_root(parent, q)].push_back(q);
    }
    std::vector<std::vector<uint32_t>> out;
    for (auto &members : by_root) {
        if (!members.empty()) {
            out.push_back(std::move(members));
        }
    }
    return out;
}

void keep_top(std::vector<ScoredCandidate> &top, ScoredCandidate cand,
              bool (*before)(const ScoredCandidate &, const ScoredCandidate &)) {
    auto pos = std::upper_bound(top.begin(), top.end(), cand, before);
    if (static_cast<size_t>(pos - top.begin()) >= kTopCandidates) {
        return;
    }
    top.insert(pos, std::move(cand));
    if (top.size() > kTopCandidates) {
        top.pop_back();
    }
}

void fill_plan_diagnostics(StrategyOutcome &out) {
    if (out.plan) {
        out.diagnostics["n_cuts"] = static_cast<double>(out.plan->locations.size());
        out.diagnostics["overhead"] = out.plan->overhead_estimate;
        out.diagnostics["n_subexperiments"] = static_cast<double>(out.plan->n_subexperiments);
    } else {
        out.diagnostics["n_cuts"] = 0;
        out.diagnostics["overhead"] = 1;
        out.diagnostics["n_subexperiments"] = out.skipped ? 0 : 1;
    }
}

}  // namespace

StrategyOutcome fitv3_select(const Circuit &c, const std::vector<Observable> &obs, const CutBudget &budget,
                             const ScoreWeights &weights) {
    (void)obs;  // The score depends on the plan only; observables ride along for interface symmetry.
    StrategyOutcome out;
    const uint32_t n = c.num_qubits();

    // Candidate pool: two-qubit gates, each mapped to its interaction edge.
    std::vector<Edge> edges;
    std::vector<size_t> pool;
    std::vector<size_t> edge_of;
    std::vector<double> gate_overhead;
    std::vector<uint64_t> gate_terms;
    for (size_t k = 0; k < c.size(); k++) {
        const Gate &g = c[k];
        if (!is_two_qubit(g.kind)) {
            continue;
        }
        uint32_t a = std::min(g.q0(), g.q1());
        uint32_t b = std::max(g.q0(), g.q1());
        size_t e = 0;
        while (e < edges.size() && !(edges[e].a == a && edges[e].b == b)) {
            e++;
        }
        if (e == edges.size()) {
            edges.push_back({a, b, 0});
        }
        edges[e].multiplicity++;
        pool.push_back(k);
        edge_of.push_back(e);
        const CutLocation loc = CutLocation::gate(k);
        gate_overhead.push_back(estimate_overhead(c, std::span(&loc, 1)));
        gate_terms.push_back(gate_cut_basis(g.kind, g.angle).terms.size());
    }

    const size_t base_components = components(n, edges, std::vector<uint32_t>(edges.size(), 0)).size();
    uint64_t evaluated = 0;
    uint64_t rejected_width = 0;
    uint64_t rejected_overhead = 0;
    uint64_t not_separating = 0;
    std::vector<ScoredCandidate> top;

    std::vector<size_t> chosen;
    std::vector<uint32_t> removed(edges.size(), 0);
    // Depth-first over index-increasing subsets, so each K is visited once.
    auto visit = [&](auto &&self, size_t start) -> void {
        if (!chosen.empty()) {
            evaluated++;
            auto comps = components(n, edges, removed);
            if (comps.size() <= base_components) {
                not_separating++;
            } else {
                ScoredCandidate cand;
                for (size_t i : chosen) {
                    cand.locations.push_back(CutLocation::gate(pool[i]));
                    cand.overhead *= gate_overhead[i];
                    cand.n_subexperiments *= gate_terms[i];
                }
                cand.partitions = std::move(comps);
                if (cand.max_width() > budget.q_max) {
                    cand.feasible = false;
                    cand.rejection_reason = Rejection::WidthViolation;
                    rejected_width++;
                } else if (cand.overhead > budget.overhead_cap) {
                    cand.feasible = false;
                    cand.rejection_reason = Rejection::OverheadExceeded;
                    rejected_overhead++;
                } else {
                    cand.score = score(cand, budget.q_max, weights);
                    keep_top(top, std::move(cand), fitv3_before);
                }
            }
        }
        if (chosen.size() >= budget.max_cuts) {
            return;
        }
        for (size_t i = start; i < pool.size(); i++) {
            chosen.push_back(i);
            removed[edge_of[i]]++;
            self(self, i + 1);
            removed[edge_of[i]]--;
            chosen.pop_back();
        }
    };
    visit(visit, 0);

    out.top_candidates = top;
    if (!top.empty()) {
        const auto &best = top.front();
        out.plan = make_plan(c, best.locations, best.partitions);
    }
    fill_plan_diagnostics(out);
    out.diagnostics["candidates_evaluated"] = static_cast<double>(evaluated);
    out.diagnostics["rejected_width"] = static_cast<double>(rejected_width);
    out.diagnostics["rejected_overhead"] = static_cast<double>(rejected_overhead);
    out.diagnostics["not_separating"] = static_cast<double>(not_separating);
    if (out.plan) {
        out.diagnostics["score"] = top.front().score;
    }
    return out;
}

std::vector<PresetConfig> default_presets() {
    return {
        {2, 0, 0xA11CE0},
        {2, 1, 0xA11CE1},
        {2, 2, 0xA11CE2},
        {3, 0, 0xA11CE3},
        {3, 1, 0xA11CE4},
        {3, 2, 0xA11CE5},
    };
}

namespace {

/// Auto order: fewer cuts, lower overhead, smaller max width; then preset
/// order (stable sort keeps it).
bool auto_before(const ScoredCandidate &a, const ScoredCandidate &b) {
    if (a.feasible != b.feasible) {
        return a.feasible;
    }
    if (a.locations.size() != b.locations.size()) {
        return a.locations.size() < b.locations.size();
    }
    if (a.overhead != b.overhead) {
        return a.overhead < b.overhead;
    }
    return a.max_width() < b.max_width();
}

/// Local search from a seeded balanced split; returns the part of each qubit.
std::vector<uint32_t> refine_partition(const std::vector<std::vector<double>> &w, const PresetConfig &preset) {
    const auto n = static_cast<uint32_t>(w.size());
    const uint32_t k = preset.partitions;
    const uint32_t lo_raw = n / k;
    const uint32_t lo = lo_raw > preset.tolerance ? std::max(1u, lo_raw - preset.tolerance) : 1u;
    const uint32_t hi = (n + k - 1) / k + preset.tolerance;

    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(preset.seed);
    for (uint32_t i = n; i > 1; i--) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::vector<uint32_t> part(n);
    std::vector<uint32_t> size(k, 0);
    for (uint32_t i = 0; i < n; i++) {
        part[order[i]] = i % k;
        size[i % k]++;
    }

    // Weight from v to every part.
    auto link = [&](uint32_t v, uint32_t p) {
        double total = 0;
        for (uint32_t u = 0; u < n; u++) {
            if (u != v && part[u] == p) {
                total += w[v][u];
            }
        }
        return total;
    };
    constexpr double kEps = 1e-12;
    while (true) {
        double best_gain = kEps;
        int best_kind = 0;  // 1 move, 2 swap
        uint32_t bv = 0, bu = 0, bp = 0;
        for (uint32_t v = 0; v < n; v++) {
            const double own = link(v, part[v]);
            for (uint32_t p = 0; p < k; p++) {
                if (p == part[v] || size[part[v]] <= lo || size[p] >= hi) {
                    continue;
                }
                double gain = link(v, p) - own;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_kind = 1;
                    bv = v;
                    bp = p;
                }
            }
        }
        for (uint32_t v = 0; v < n; v++) {
            for (uint32_t u = v + 1; u < n; u++) {
                if (part[u] == part[v]) {
                    continue;
                }
                double gain = link(v, part[u]) - link(v, part[v]) + link(u, part[v]) - link(u, part[u]) -
                              2 * w[u][v];
                if (gain > best_gain) {
                    best_gain = gain;
                    best_kind = 2;
                    bv = v;
                    bu = u;
                }
            }
        }
        if (best_kind == 0) {
            break;
        }
        if (best_kind == 1) {
            size[part[bv]]--;
            size[bp]++;
            part[bv] = bp;
        } else {
            std::swap(part[bv], part[bu]);
        }
    }
    return part;
}

}  // namespace

StrategyOutcome auto_select(const Circuit &c, const CutBudget &budget, const std::vector<PresetConfig> &presets) {
    StrategyOutcome out;
    const uint32_t n = c.num_qubits();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto &g : c.gates()) {
        if (is_two_qubit(g.kind)) {
            double weight = g.kind == GateKind::SWAP ? 3.0 : 1.0;
            w[g.q0()][g.q1()] += weight;
            w[g.q1()][g.q0()] += weight;
        }
    }

    std::vector<ScoredCandidate> candidates;
    for (const auto &preset : presets) {
        if (preset.partitions < 2 || preset.partitions > n) {
            continue;
        }
        const auto part = refine_partition(w, preset);
        ScoredCandidate cand;
        cand.partitions.assign(preset.partitions, {});
        for (uint32_t q = 0; q < n; q++) {
            cand.partitions[part[q]].push_back(q);
        }
        std::erase_if(cand.partitions, [](const auto &p) { return p.empty(); });
        for (size_t k = 0; k < c.size(); k++) {
            const Gate &g = c[k];
            if (is_two_qubit(g.kind) && part[g.q0()] != part[g.q1()]) {
                cand.locations.push_back(CutLocation::gate(k));
            }
        }
        CutPlan plan = make_plan(c, cand.locations, cand.partitions);
        cand.partitions = plan.partitions;
        cand.overhead = plan.overhead_estimate;
        cand.n_subexperiments = plan.n_subexperiments;
        cand.rejection_reason = feasibility_check(plan, budget);
        cand.feasible = !cand.rejection_reason.has_value();
        cand.score = score(cand, budget.q_max, ScoreWeights{});
        candidates.push_back(std::move(cand));
    }
    std::stable_sort(candidates.begin(), candidates.end(), auto_before);
    out.diagnostics["candidates_evaluated"] = static_cast<double>(candidates.size());

    if (candidates.empty()) {
        out.skipped = true;
        out.skip_reason = "NoPresets";
    } else if (!candidates.front().feasible) {
        bool any_narrow = std::any_of(candidates.begin(), candidates.end(), [](const ScoredCandidate &cand) {
            return cand.rejection_reason != Rejection::WidthViolation;
        });
        out.skipped = true;
        out.skip_reason = any_narrow ? "OverheadExceeded" : "WidthViolation";
    } else {
        const auto &best = candidates.front();
        out.plan = make_plan(c, best.locations, best.partitions);
    }
    if (candidates.size() > kTopCandidates) {
        candidates.resize(kTopCandidates);
    }
    out.top_candidates = std::move(candidates);
    fill_plan_diagnostics(out);
    return out;
}

}  // namespace qcut
