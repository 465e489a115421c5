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

#include "qcut/qpd.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>

#include "qcut/error.h"
#include "qcut/rng.h"

namespace qcut {

namespace {

/// Neumaier-compensated accumulator.
class CompensatedSum {
   public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const {
        return sum_ + comp_;
    }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

Gate g1(GateKind kind, double angle = 0.0) {
    return Gate::one(kind, 0, angle);
}

QpdBasis cz_basis() {
    const Gate m = Gate::measure(0);
    return QpdBasis{{
        {0.5, {g1(GateKind::S)}, {g1(GateKind::S)}},
        {0.5, {g1(GateKind::Sdg)}, {g1(GateKind::Sdg)}},
        {0.5, {m}, {}},
        {-0.5, {m}, {g1(GateKind::Z)}},
        {0.5, {}, {m}},
        {-0.5, {g1(GateKind::Z)}, {m}},
    }};
}

/// CP(t) = e^{it/4} (Rz(t/2) x Rz(t/2)) exp(i t/4 Z x Z); the ZZ rotation is
/// decomposed into identity, ZZ and measure/half-rotation pairs.
QpdBasis cp_basis(double angle) {
    const double phi = angle / 4;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double half = angle / 2;
    const double pi2 = std::numbers::pi / 2;
    const Gate m = Gate::measure(0);
    std::vector<QpdTerm> terms = {
        {c * c, {g1(GateKind::Rz, half)}, {g1(GateKind::Rz, half)}},
        {s * s, {g1(GateKind::Z), g1(GateKind::Rz, half)}, {g1(GateKind::Z), g1(GateKind::Rz, half)}},
        {c * s, {m}, {g1(GateKind::Rz, half - pi2)}},
        {-c * s, {m}, {g1(GateKind::Rz, half + pi2)}},
        {c * s, {g1(GateKind::Rz, half - pi2)}, {m}},
        {-c * s, {g1(GateKind::Rz, half + pi2)}, {m}},
    };
    std::erase_if(terms, [](const QpdTerm &t) {
        return std::abs(t.coefficient) < 1e-15;
    });
    return QpdBasis{std::move(terms)};
}

QpdBasis cx_basis() {
    QpdBasis basis = cz_basis();
    for (auto &t : basis.terms) {
        std::vector<Gate> target = {g1(GateKind::H)};
        target.insert(target.end(), t.right_ops.begin(), t.right_ops.end());
        target.push_back(g1(GateKind::H));
        t.right_ops = std::move(target);
    }
    return basis;
}

/// SWAP = CX(a,b) CX(b,a) CX(a,b), each CX cut independently.
QpdBasis swap_basis() {
    const QpdBasis cx = cx_basis();
    QpdBasis out;
    auto cat = [](std::vector<Gate> &dst, const std::vector<Gate> &src) {
        dst.insert(dst.end(), src.begin(), src.end());
    };
    for (const auto &t1 : cx.terms) {
        for (const auto &t2 : cx.terms) {
            for (const auto &t3 : cx.terms) {
                QpdTerm t;
                t.coefficient = t1.coefficient * t2.coefficient * t3.coefficient;
                cat(t.left_ops, t1.left_ops);
                cat(t.left_ops, t2.right_ops);
                cat(t.left_ops, t3.left_ops);
                cat(t.right_ops, t1.right_ops);
                cat(t.right_ops, t2.left_ops);
                cat(t.right_ops, t3.right_ops);
                out.terms.push_back(std::move(t));
            }
        }
    }
    return out;
}

}  // namespace

std::string CutLocation::str() const {
    if (kind == Kind::Gate) {
        return "gate@" + std::to_string(gate_index);
    }
    return "wire(q" + std::to_string(qubit) + ")@" + std::to_string(gate_index);
}

double QpdBasis::one_norm() const {
    double total = 0;
    for (const auto &t : terms) {
        total += std::abs(t.coefficient);
    }
    return total;
}

QpdBasis gate_cut_basis(GateKind kind, double angle) {
    switch (kind) {
        case GateKind::CZ:
            return cz_basis();
        case GateKind::CX:
            return cx_basis();
        case GateKind::CP:
            return cp_basis(angle);
        case GateKind::SWAP:
            return swap_basis();
        default:
            throw QcutError(ErrorCode::NoDecomposition,
                            std::string("no gate-cut decomposition for ") + gate_kind_name(kind));
    }
}

QpdBasis wire_cut_basis() {
    const Gate m = Gate::measure(0);
    const Gate h = g1(GateKind::H);
    const Gate sdg = g1(GateKind::Sdg);
    auto prep = [](PrepKind k) {
        return std::vector<Gate>{Gate::prepare(0, k)};
    };
    return QpdBasis{{
        {0.5, {}, prep(PrepKind::Zero)},
        {0.5, {}, prep(PrepKind::One)},
        {0.5, {h, m}, prep(PrepKind::Plus)},
        {-0.5, {h, m}, prep(PrepKind::Minus)},
        {0.5, {sdg, h, m}, prep(PrepKind::PlusI)},
        {-0.5, {sdg, h, m}, prep(PrepKind::MinusI)},
        {0.5, {m}, prep(PrepKind::Zero)},
        {-0.5, {m}, prep(PrepKind::One)},
    }};
}

double estimate_overhead(std::span<const CutLocation> locations) {
    double total = 1.0;
    for (const auto &loc : locations) {
        total *= loc.kind == CutLocation::Kind::Gate ? kGateCutBase : kWireCutBase;
    }
    return total;
}

uint32_t elementary_cut_count(const Circuit &c, std::span<const CutLocation> locations) {
    uint32_t total = 0;
    for (const auto &loc : locations) {
        bool swap = loc.kind == CutLocation::Kind::Gate && loc.gate_index < c.size() &&
                    c[loc.gate_index].kind == GateKind::SWAP;
        total += swap ? 3 : 1;
    }
    return total;
}

double estimate_overhead(const Circuit &c, std::span<const CutLocation> locations) {
    double total = 1.0;
    for (const auto &loc : locations) {
        if (loc.kind == CutLocation::Kind::Wire) {
            total *= kWireCutBase;
        } else if (loc.gate_index < c.size() && c[loc.gate_index].kind == GateKind::SWAP) {
            total *= kGateCutBase * kGateCutBase * kGateCutBase;
        } else {
            total *= kGateCutBase;
        }
    }
    return total;
}

size_t CutPlan::max_width() const {
    size_t w = 0;
    for (const auto &p : partitions) {
        w = std::max(w, p.size());
    }
    return w;
}

size_t CutPlan::min_width() const {
    if (partitions.empty()) {
        return 0;
    }
    size_t w = partitions.front().size();
    for (const auto &p : partitions) {
        w = std::min(w, p.size());
    }
    return w;
}

namespace {

constexpr size_t kNoCut = static_cast<size_t>(-1);

struct RegisterEvent {
    bool is_wire = false;
    size_t gate_index = 0;
    uint32_t a = 0;  // register qubits (wire: from segment)
    uint32_t b = 0;  // (wire: to segment)
    size_t cut = kNoCut;  // index into the location list
};

/// The circuit rewritten over the register extended by one fresh segment per
/// wire cut.
struct ExpandedRegister {
    uint32_t width = 0;
    std::vector<RegisterEvent> events;
    std::vector<uint32_t> final_segment;
};

ExpandedRegister expand(const Circuit &c, std::span<const CutLocation> locations) {
    const uint32_t n = c.num_qubits();
    for (const auto &g : c.gates()) {
        if (!is_unitary(g.kind)) {
            throw QcutError(ErrorCode::InvalidArgument, "cutting expects a measurement-free circuit");
        }
    }
    std::vector<size_t> gate_cut_of(c.size(), kNoCut);
    std::vector<std::vector<size_t>> wires_after(c.size());
    for (size_t i = 0; i < locations.size(); i++) {
        const auto &loc = locations[i];
        if (loc.gate_index >= c.size()) {
            throw QcutError(ErrorCode::InvalidPlan, "cut " + loc.str() + " is past the end of the circuit");
        }
        const Gate &g = c[loc.gate_index];
        if (loc.kind == CutLocation::Kind::Gate) {
            if (!is_two_qubit(g.kind)) {
                throw QcutError(ErrorCode::InvalidPlan, "cut " + loc.str() + " is not on a two-qubit gate");
            }
            if (gate_cut_of[loc.gate_index] != kNoCut) {
                throw QcutError(ErrorCode::InvalidPlan, "duplicate cut " + loc.str());
            }
            gate_cut_of[loc.gate_index] = i;
        } else {
            if (loc.qubit >= n) {
                throw QcutError(ErrorCode::InvalidPlan, "cut " + loc.str() + " names a qubit outside the circuit");
            }
            for (size_t other : wires_after[loc.gate_index]) {
                if (locations[other].qubit == loc.qubit) {
                    throw QcutError(ErrorCode::InvalidPlan, "duplicate cut " + loc.str());
                }
            }
            wires_after[loc.gate_index].push_back(i);
        }
    }

    ExpandedRegister reg;
    reg.width = n;
    std::vector<uint32_t> segment(n);
    std::iota(segment.begin(), segment.end(), 0u);
    std::vector<uint32_t> wire_segment(locations.size(), 0);
    for (size_t i = 0; i < locations.size(); i++) {
        if (locations[i].kind == CutLocation::Kind::Wire) {
            wire_segment[i] = reg.width++;
        }
    }
    for (size_t k = 0; k < c.size(); k++) {
        const Gate &g = c[k];
        RegisterEvent ev;
        ev.gate_index = k;
        ev.a = segment[g.q0()];
        ev.b = g.arity() == 2 ? segment[g.q1()] : ev.a;
        ev.cut = gate_cut_of[k];
        reg.events.push_back(ev);
        for (size_t i : wires_after[k]) {
            RegisterEvent w;
            w.is_wire = true;
            w.gate_index = k;
            w.a = segment[locations[i].qubit];
            w.b = wire_segment[i];
            w.cut = i;
            segment[locations[i].qubit] = w.b;
            reg.events.push_back(w);
        }
    }
    reg.final_segment = segment;
    return reg;
}

struct UnionFind {
    explicit UnionFind(uint32_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    uint32_t find(uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<uint32_t> parent;
};

std::vector<std::vector<uint32_t>> components_of(const ExpandedRegister &reg) {
    UnionFind uf(reg.width);
    for (const auto &ev : reg.events) {
        if (!ev.is_wire && ev.cut == kNoCut && ev.a != ev.b) {
            uf.unite(ev.a, ev.b);
        }
    }
    std::map<uint32_t, std::vector<uint32_t>> groups;
    for (uint32_t q = 0; q < reg.width; q++) {
        groups[uf.find(q)].push_back(q);
    }
    std::vector<std::vector<uint32_t>> out;
    for (auto &[root, members] : groups) {
        out.push_back(std::move(members));
    }
    return out;
}

QpdBasis basis_for(const Circuit &c, const CutLocation &loc) {
    if (loc.kind == CutLocation::Kind::Wire) {
        return wire_cut_basis();
    }
    const Gate &g = c[loc.gate_index];
    return gate_cut_basis(g.kind, g.angle);
}

uint64_t count_combinations(const std::vector<QpdBasis> &bases) {
    uint64_t total = 1;
    for (const auto &b : bases) {
        total *= b.terms.size();
        if (total > (uint64_t{1} << 40)) {
            return total;
        }
    }
    return total;
}

}  // namespace

std::vector<std::vector<uint32_t>> cut_components(const Circuit &c, std::span<const CutLocation> locations) {
    return components_of(expand(c, locations));
}

CutPlan make_plan(const Circuit &c, std::vector<CutLocation> locations) {
    std::sort(locations.begin(), locations.end());
    auto partitions = cut_components(c, locations);
    return make_plan(c, std::move(locations), std::move(partitions));
}

CutPlan make_plan(const Circuit &c, std::vector<CutLocation> locations, std::vector<std::vector<uint32_t>> partitions) {
    CutPlan plan;
    std::vector<QpdBasis> bases;
    for (const auto &loc : locations) {
        bases.push_back(basis_for(c, loc));
    }
    plan.overhead_estimate = estimate_overhead(c, locations);
    plan.n_subexperiments = count_combinations(bases);
    plan.locations = std::move(locations);
    for (auto &p : partitions) {
        std::sort(p.begin(), p.end());
    }
    std::sort(partitions.begin(), partitions.end());
    plan.partitions = std::move(partitions);
    return plan;
}

Circuit Subexperiment::body() const {
    Circuit out(circuit.num_qubits(), circuit.name());
    for (size_t k = 0; k + n_terminal < circuit.size(); k++) {
        out.append(circuit[k]);
    }
    return out;
}

SubexperimentSet generate_subexperiments(const Circuit &c, const CutPlan &plan, const SamplingMode &mode,
                                         uint32_t q_max) {
    const ExpandedRegister reg = expand(c, plan.locations);

    // Partition layout and validation.
    std::vector<int64_t> part_of(reg.width, -1);
    std::vector<uint32_t> local_of(reg.width, 0);
    for (size_t p = 0; p < plan.partitions.size(); p++) {
        const auto &members = plan.partitions[p];
        if (members.size() > q_max) {
            throw QcutError(ErrorCode::WidthViolation, "partition " + std::to_string(p) + " has width " +
                                                           std::to_string(members.size()) + " > q_max " +
                                                           std::to_string(q_max));
        }
        for (size_t l = 0; l < members.size(); l++) {
            uint32_t q = members[l];
            if (q >= reg.width || part_of[q] != -1) {
                throw QcutError(ErrorCode::InvalidPlan, "partitions must be disjoint register subsets");
            }
            part_of[q] = static_cast<int64_t>(p);
            local_of[q] = static_cast<uint32_t>(l);
        }
    }
    for (uint32_t q = 0; q < reg.width; q++) {
        if (part_of[q] == -1) {
            throw QcutError(ErrorCode::InvalidPlan, "qubit " + std::to_string(q) + " is in no partition");
        }
    }
    for (const auto &ev : reg.events) {
        if (!ev.is_wire && ev.cut == kNoCut && part_of[ev.a] != part_of[ev.b]) {
            throw QcutError(ErrorCode::InvalidPlan,
                            "uncut gate " + std::to_string(ev.gate_index) + " joins two partitions");
        }
    }
    for (const auto &ev : reg.events) {
        if (ev.cut != kNoCut && part_of[ev.a] == part_of[ev.b] && !ev.is_wire) {
            // A cut inside one partition is legal; it only costs overhead.
            continue;
        }
    }

    std::vector<QpdBasis> bases;
    for (const auto &loc : plan.locations) {
        bases.push_back(basis_for(c, loc));
    }

    // Term choices per group and their weights.
    std::vector<std::vector<uint32_t>> choices;
    std::vector<double> weights;
    const auto *sampled_mode = std::get_if<SampledMode>(&mode);
    const bool enumerate = sampled_mode == nullptr ||
                           (sampled_mode->exact_if_covered && sampled_mode->n_samples >= count_combinations(bases));
    if (enumerate) {
        uint64_t total = count_combinations(bases);
        if (total > 2'000'000) {
            throw QcutError(ErrorCode::InvalidArgument,
                            "exact mode would need " + std::to_string(total) + " term combinations");
        }
        for (uint64_t idx = 0; idx < total; idx++) {
            std::vector<uint32_t> choice(bases.size());
            uint64_t rest = idx;
            double w = 1.0;
            for (size_t k = bases.size(); k-- > 0;) {
                choice[k] = static_cast<uint32_t>(rest % bases[k].terms.size());
                rest /= bases[k].terms.size();
                w *= bases[k].terms[choice[k]].coefficient;
            }
            choices.push_back(std::move(choice));
            weights.push_back(w);
        }
    } else {
        const auto &sampled = std::get<SampledMode>(mode);
        if (sampled.n_samples == 0) {
            throw QcutError(ErrorCode::InvalidArgument, "sampled mode needs at least one sample");
        }
        double scale = 1.0;
        for (const auto &b : bases) {
            scale *= b.one_norm();
        }
        scale /= sampled.n_samples;
        Rng rng(sampled.seed);
        for (uint32_t s = 0; s < sampled.n_samples; s++) {
            std::vector<uint32_t> choice(bases.size());
            double sign = 1.0;
            for (size_t k = 0; k < bases.size(); k++) {
                const auto &terms = bases[k].terms;
                double u = rng.uniform() * bases[k].one_norm();
                uint32_t j = 0;
                double acc = std::abs(terms[0].coefficient);
                while (j + 1 < terms.size() && u >= acc) {
                    j++;
                    acc += std::abs(terms[j].coefficient);
                }
                choice[k] = j;
                if (terms[j].coefficient < 0) {
                    sign = -sign;
                }
            }
            choices.push_back(std::move(choice));
            weights.push_back(sign * scale);
        }
    }

    const uint32_t n_parts = static_cast<uint32_t>(plan.partitions.size());
    std::vector<int32_t> observed_of(reg.width, -1);
    for (uint32_t q = 0; q < c.num_qubits(); q++) {
        observed_of[reg.final_segment[q]] = static_cast<int32_t>(q);
    }

    SubexperimentSet set;
    set.n_groups = static_cast<uint32_t>(choices.size());
    set.n_partitions = n_parts;
    set.original_width = c.num_qubits();
    set.group_weights = weights;
    set.subexperiments.reserve(static_cast<size_t>(set.n_groups) * n_parts);

    for (uint32_t g = 0; g < set.n_groups; g++) {
        std::vector<Subexperiment> subs(n_parts);
        std::vector<uint32_t> n_meas(n_parts, 0);
        for (uint32_t p = 0; p < n_parts; p++) {
            auto &s = subs[p];
            const auto &members = plan.partitions[p];
            s.circuit = Circuit(static_cast<uint32_t>(members.size()),
                                c.name() + "_g" + std::to_string(g) + "_p" + std::to_string(p));
            s.weight = weights[g];
            s.term_indices = choices[g];
            s.partition = p;
            s.group = g;
            s.qubits = members;
            for (uint32_t q : members) {
                s.observed.push_back(observed_of[q]);
            }
        }
        auto place = [&](const std::vector<Gate> &ops, uint32_t reg_qubit) {
            auto p = static_cast<uint32_t>(part_of[reg_qubit]);
            for (const auto &op : ops) {
                if (op.kind == GateKind::MeasureZ) {
                    subs[p].sign_slots.push_back(n_meas[p]++);
                }
                subs[p].circuit.append(op.on(local_of[reg_qubit]));
            }
        };
        for (const auto &ev : reg.events) {
            if (ev.cut != kNoCut) {
                const QpdTerm &term = bases[ev.cut].terms[choices[g][ev.cut]];
                place(term.left_ops, ev.a);
                place(term.right_ops, ev.b);
                continue;
            }
            if (ev.is_wire) {
                continue;
            }
            auto p = static_cast<uint32_t>(part_of[ev.a]);
            subs[p].circuit.append(c[ev.gate_index].on(local_of[ev.a], local_of[ev.b]));
        }
        for (uint32_t p = 0; p < n_parts; p++) {
            auto &s = subs[p];
            s.observed_slots.assign(s.observed.size(), -1);
            for (uint32_t l = 0; l < s.observed.size(); l++) {
                if (s.observed[l] >= 0) {
                    s.circuit.append(Gate::measure(l));
                    s.observed_slots[l] = static_cast<int32_t>(n_meas[p]++);
                    s.n_terminal++;
                }
            }
            set.subexperiments.push_back(std::move(s));
        }
    }
    return set;
}

std::vector<double> ExactEstimator::estimate(const Subexperiment &sub, size_t, std::span<const std::string> local_terms) {
    const auto branches = enumerate_branches(sub.body());
    uint64_t sign_mask = 0;
    for (uint32_t slot : sub.sign_slots) {
        sign_mask |= uint64_t{1} << slot;
    }
    std::vector<double> out;
    out.reserve(local_terms.size());
    for (const auto &term : local_terms) {
        CompensatedSum total;
        for (const auto &b : branches) {
            double sign = (__builtin_popcountll(b.outcomes & sign_mask) & 1) ? -1.0 : 1.0;
            total.add(b.probability * sign * pauli_expectation(b.state, term).real());
        }
        out.push_back(total.value());
    }
    return out;
}

std::vector<double> ShotEstimator::estimate(const Subexperiment &sub, size_t index,
                                            std::span<const std::string> local_terms) {
    uint64_t sign_mask = 0;
    for (uint32_t slot : sub.sign_slots) {
        sign_mask |= uint64_t{1} << slot;
    }
    // Basis key: measured Pauli per local qubit; identity positions read Z.
    std::map<std::string, std::vector<size_t>> by_basis;
    for (size_t t = 0; t < local_terms.size(); t++) {
        std::string key = local_terms[t];
        std::replace(key.begin(), key.end(), 'I', 'Z');
        by_basis[key].push_back(t);
    }
    const Circuit body = sub.body();
    std::vector<double> out(local_terms.size(), 0.0);
    for (const auto &[key, members] : by_basis) {
        Circuit run = body;
        run.append(measurement_rotation(PauliString{key, 1.0}));
        for (uint32_t l = 0; l < sub.observed.size(); l++) {
            if (sub.observed[l] >= 0) {
                run.append(Gate::measure(l));
            }
        }
        const uint64_t seed = derive_seed(seed_, {index, hash_label(key)});
        const auto words = sample_measurements(run, noise_, shots_, seed);
        total_shots_ += shots_;
        executions_++;
        for (size_t t : members) {
            uint64_t eig_mask = 0;
            for (uint32_t l = 0; l < sub.observed.size(); l++) {
                if (local_terms[t][l] != 'I') {
                    eig_mask |= uint64_t{1} << sub.observed_slots[l];
                }
            }
            const uint64_t mask = sign_mask | eig_mask;
            int64_t acc = 0;
            for (uint64_t w : words) {
                acc += (__builtin_popcountll(w & mask) & 1) ? -1 : 1;
            }
            out[t] = static_cast<double>(acc) / static_cast<double>(words.size());
        }
    }
    return out;
}

double reconstruct_expectation(std::span<const double> results, std::span<const double> weights) {
    if (results.size() != weights.size()) {
        throw QcutError(ErrorCode::Dimension, "results and weights differ in length");
    }
    CompensatedSum total;
    for (size_t i = 0; i < results.size(); i++) {
        total.add(results[i] * weights[i]);
    }
    return total.value();
}

namespace {

std::string restrict_term(const std::string &paulis, const Subexperiment &sub) {
    std::string local(sub.observed.size(), 'I');
    for (size_t l = 0; l < sub.observed.size(); l++) {
        if (sub.observed[l] >= 0) {
            local[l] = paulis[static_cast<size_t>(sub.observed[l])];
        }
    }
    return local;
}

}  // namespace

std::vector<double> reconstruct_observables(const SubexperimentSet &set, std::span<const Observable> observables,
                                            SubexperimentEstimator &estimator) {
    for (const auto &obs : observables) {
        if (obs.num_qubits() != set.original_width) {
            throw QcutError(ErrorCode::Dimension, "observable width does not match the cut circuit");
        }
    }
    // Per subexperiment: local term -> estimate.
    std::vector<std::map<std::string, double>> estimates(set.subexperiments.size());
    for (size_t i = 0; i < set.subexperiments.size(); i++) {
        const auto &sub = set.subexperiments[i];
        std::vector<std::string> needed;
        for (const auto &obs : observables) {
            for (const auto &term : obs.terms()) {
                needed.push_back(restrict_term(term.paulis, sub));
            }
        }
        std::sort(needed.begin(), needed.end());
        needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
        auto values = estimator.estimate(sub, i, needed);
        for (size_t k = 0; k < needed.size(); k++) {
            estimates[i][needed[k]] = values[k];
        }
    }

    std::vector<double> out;
    for (const auto &obs : observables) {
        CompensatedSum total;
        for (const auto &term : obs.terms()) {
            std::vector<double> products(set.n_groups, 1.0);
            for (uint32_t g = 0; g < set.n_groups; g++) {
                for (uint32_t p = 0; p < set.n_partitions; p++) {
                    size_t i = static_cast<size_t>(g) * set.n_partitions + p;
                    products[g] *= estimates[i].at(restrict_term(term.paulis, set.subexperiments[i]));
                }
            }
            total.add(term.coefficient * reconstruct_expectation(products, set.group_weights));
        }
        out.push_back(total.value());
    }
    return out;
}

std::vector<double> reconstruct_distribution(const SubexperimentSet &set) {
    const uint32_t n = set.original_width;
    if (n > 20) {
        throw QcutError(ErrorCode::InvalidWidth, "distribution reconstruction is limited to 20 qubits");
    }
    std::vector<CompensatedSum> dist(uint64_t{1} << n);
    for (uint32_t g = 0; g < set.n_groups; g++) {
        // Signed quasi-distribution per partition over its observed qubits.
        std::vector<std::vector<double>> parts;
        std::vector<std::vector<uint32_t>> observed_qubits;
        for (uint32_t p = 0; p < set.n_partitions; p++) {
            const auto &sub = set.at(g, p);
            std::vector<uint32_t> locals;
            std::vector<uint32_t> originals;
            for (uint32_t l = 0; l < sub.observed.size(); l++) {
                if (sub.observed[l] >= 0) {
                    locals.push_back(l);
                    originals.push_back(static_cast<uint32_t>(sub.observed[l]));
                }
            }
            uint64_t sign_mask = 0;
            for (uint32_t slot : sub.sign_slots) {
                sign_mask |= uint64_t{1} << slot;
            }
            std::vector<double> q(uint64_t{1} << locals.size(), 0.0);
            for (const auto &b : enumerate_branches(sub.body())) {
                double sign = (__builtin_popcountll(b.outcomes & sign_mask) & 1) ? -1.0 : 1.0;
                auto amps = b.state.amplitudes();
                for (uint64_t i = 0; i < amps.size(); i++) {
                    uint64_t key = 0;
                    for (size_t k = 0; k < locals.size(); k++) {
                        key |= ((i >> locals[k]) & 1) << k;
                    }
                    q[key] += sign * b.probability * std::norm(amps[i]);
                }
            }
            parts.push_back(std::move(q));
            observed_qubits.push_back(std::move(originals));
        }
        for (uint64_t x = 0; x < dist.size(); x++) {
            double prod = set.group_weights[g];
            for (size_t p = 0; p < parts.size(); p++) {
                uint64_t key = 0;
                for (size_t k = 0; k < observed_qubits[p].size(); k++) {
                    key |= ((x >> observed_qubits[p][k]) & 1) << k;
                }
                prod *= parts[p][key];
            }
            dist[x].add(prod);
        }
    }
    std::vector<double> out;
    out.reserve(dist.size());
    for (const auto &d : dist) {
        out.push_back(d.value());
    }
    return out;
}

}  // namespace qcut
