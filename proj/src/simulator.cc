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

#include "qcut/simulator.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qcut/error.h"
#include "qcut/observable.h"
#include "qcut/rng.h"

namespace qcut {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Complex kI{0.0, 1.0};

inline Complex mul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// Calls f(i0, i1) for every index pair differing only in bit q.
template <typename F>
inline void for_each_pair(uint64_t size, uint32_t q, F f) {
    const uint64_t stride = uint64_t{1} << q;
    for (uint64_t base = 0; base < size; base += 2 * stride) {
        for (uint64_t i = base; i < base + stride; i++) {
            f(i, i + stride);
        }
    }
}

/// Calls f(i) for every index with zeros at bits a and b.
template <typename F>
inline void for_each_quad(uint64_t size, uint32_t a, uint32_t b, F f) {
    const uint64_t lo = uint64_t{1} << std::min(a, b);
    const uint64_t hi = uint64_t{1} << std::max(a, b);
    for (uint64_t x = 0; x < size; x += 2 * hi) {
        for (uint64_t y = x; y < x + hi; y += 2 * lo) {
            for (uint64_t i = y; i < y + lo; i++) {
                f(i);
            }
        }
    }
}

void apply_prep_gates(StateVector &state, uint32_t q, PrepKind prep) {
    // Qubit q is |0> on entry.
    switch (prep) {
        case PrepKind::Zero:
            break;
        case PrepKind::One:
            state.apply_pauli(q, 1);
            break;
        case PrepKind::Plus:
            state.apply_gate(Gate::one(GateKind::H, q));
            break;
        case PrepKind::Minus:
            state.apply_pauli(q, 1);
            state.apply_gate(Gate::one(GateKind::H, q));
            break;
        case PrepKind::PlusI:
            state.apply_gate(Gate::one(GateKind::H, q));
            state.apply_gate(Gate::one(GateKind::S, q));
            break;
        case PrepKind::MinusI:
            state.apply_pauli(q, 1);
            state.apply_gate(Gate::one(GateKind::H, q));
            state.apply_gate(Gate::one(GateKind::S, q));
            break;
    }
}

constexpr double kBranchFloor = 1e-24;

}  // namespace

Mat2 gate_matrix(const Gate &gate) {
    const double half = gate.angle / 2;
    const double c = std::cos(half);
    const double s = std::sin(half);
    switch (gate.kind) {
        case GateKind::H:
            return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y:
            return {0.0, -kI, kI, 0.0};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::S:
            return {1.0, 0.0, 0.0, kI};
        case GateKind::Sdg:
            return {1.0, 0.0, 0.0, -kI};
        case GateKind::T:
            return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
        case GateKind::Rx:
            return {c, -kI * s, -kI * s, c};
        case GateKind::Ry:
            return {c, -s, s, c};
        case GateKind::Rz:
            return {std::polar(1.0, -half), 0.0, 0.0, std::polar(1.0, half)};
        default:
            throw QcutError(ErrorCode::InvalidArgument,
                            std::string("no 2x2 matrix for ") + gate_kind_name(gate.kind));
    }
}

StateVector::StateVector(uint32_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0 || num_qubits > 30) {
        throw QcutError(ErrorCode::InvalidWidth, "state vector width must be in [1, 30]");
    }
    amps_.assign(uint64_t{1} << num_qubits, Complex{});
    amps_[0] = 1.0;
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::apply_matrix(const Mat2 &m, uint32_t q) {
    Complex *amps = amps_.data();
    if (m[1] == Complex{} && m[2] == Complex{}) {
        const Complex d0 = m[0];
        const Complex d1 = m[3];
        const bool skip0 = d0 == Complex{1.0, 0.0};
        for_each_pair(amps_.size(), q, [&](uint64_t i0, uint64_t i1) {
            if (!skip0) {
                amps[i0] = mul(d0, amps[i0]);
            }
            amps[i1] = mul(d1, amps[i1]);
        });
        return;
    }
    const Complex m0 = m[0], m1 = m[1], m2 = m[2], m3 = m[3];
    for_each_pair(amps_.size(), q, [&](uint64_t i0, uint64_t i1) {
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = mul(m0, a0) + mul(m1, a1);
        amps[i1] = mul(m2, a0) + mul(m3, a1);
    });
}

void StateVector::apply_cx(uint32_t control, uint32_t target) {
    const uint64_t cm = uint64_t{1} << control;
    const uint64_t tm = uint64_t{1} << target;
    Complex *amps = amps_.data();
    for_each_quad(amps_.size(), control, target, [&](uint64_t i) { std::swap(amps[i | cm], amps[i | cm | tm]); });
}

void StateVector::apply_cz(uint32_t a, uint32_t b) {
    const uint64_t both = (uint64_t{1} << a) | (uint64_t{1} << b);
    Complex *amps = amps_.data();
    for_each_quad(amps_.size(), a, b, [&](uint64_t i) { amps[i | both] = -amps[i | both]; });
}

void StateVector::apply_cp(uint32_t a, uint32_t b, double angle) {
    const uint64_t both = (uint64_t{1} << a) | (uint64_t{1} << b);
    const Complex phase = std::polar(1.0, angle);
    Complex *amps = amps_.data();
    for_each_quad(amps_.size(), a, b, [&](uint64_t i) { amps[i | both] = mul(phase, amps[i | both]); });
}

void StateVector::apply_swap(uint32_t a, uint32_t b) {
    const uint64_t am = uint64_t{1} << a;
    const uint64_t bm = uint64_t{1} << b;
    Complex *amps = amps_.data();
    for_each_quad(amps_.size(), a, b, [&](uint64_t i) { std::swap(amps[i | am], amps[i | bm]); });
}

void StateVector::apply_pauli(uint32_t q, int pauli) {
    Complex *amps = amps_.data();
    switch (pauli) {
        case 1:
            for_each_pair(amps_.size(), q, [&](uint64_t i0, uint64_t i1) { std::swap(amps[i0], amps[i1]); });
            break;
        case 2:
            // Y = [[0, -i], [i, 0]]
            for_each_pair(amps_.size(), q, [&](uint64_t i0, uint64_t i1) {
                const Complex a0 = amps[i0];
                const Complex a1 = amps[i1];
                amps[i0] = {a1.imag(), -a1.real()};
                amps[i1] = {-a0.imag(), a0.real()};
            });
            break;
        case 3:
            for_each_pair(amps_.size(), q, [&](uint64_t, uint64_t i1) { amps[i1] = -amps[i1]; });
            break;
        default:
            break;
    }
}

void StateVector::apply_gate(const Gate &gate) {
    switch (gate.kind) {
        case GateKind::CX:
            apply_cx(gate.q0(), gate.q1());
            return;
        case GateKind::CZ:
            apply_cz(gate.q0(), gate.q1());
            return;
        case GateKind::CP:
            apply_cp(gate.q0(), gate.q1(), gate.angle);
            return;
        case GateKind::SWAP:
            apply_swap(gate.q0(), gate.q1());
            return;
        case GateKind::X:
            apply_pauli(gate.q0(), 1);
            return;
        case GateKind::Y:
            apply_pauli(gate.q0(), 2);
            return;
        case GateKind::Z:
            apply_pauli(gate.q0(), 3);
            return;
        case GateKind::MeasureZ:
        case GateKind::PrepState:
            throw QcutError(ErrorCode::RequiresSampling,
                            std::string(gate_kind_name(gate.kind)) + " is not a unitary gate");
        default:
            apply_matrix(gate_matrix(gate), gate.q0());
    }
}

double StateVector::probability_one(uint32_t q) const {
    const uint64_t mask = uint64_t{1} << q;
    double p = 0;
    for (uint64_t i = 0; i < amps_.size(); i++) {
        if (i & mask) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

std::array<double, 2> StateVector::outcome_probabilities(uint32_t q) const {
    const uint64_t mask = uint64_t{1} << q;
    std::array<double, 2> p{0.0, 0.0};
    for (uint64_t i = 0; i < amps_.size(); i++) {
        p[(i & mask) ? 1 : 0] += std::norm(amps_[i]);
    }
    const double total = p[0] + p[1];
    return {p[0] / total, p[1] / total};
}

void StateVector::collapse(uint32_t q, int outcome, double probability) {
    const uint64_t mask = uint64_t{1} << q;
    const double scale = 1.0 / std::sqrt(probability);
    for (uint64_t i = 0; i < amps_.size(); i++) {
        bool bit = (i & mask) != 0;
        if (bit == (outcome == 1)) {
            amps_[i] *= scale;
        } else {
            amps_[i] = 0.0;
        }
    }
}

void NoiseProfile::validate() const {
    for (double p : {p1, p2, p_readout}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw QcutError(ErrorCode::InvalidArgument, "noise probabilities must lie in [0, 1]");
        }
    }
}

namespace {

Mat2 matmul(const Mat2 &x, const Mat2 &y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

Mat2 pauli_matrix(int pauli) {
    switch (pauli) {
        case 1:
            return {0.0, 1.0, 1.0, 0.0};
        case 2:
            return {0.0, -kI, kI, 0.0};
        default:
            return {1.0, 0.0, 0.0, -1.0};
    }
}

/// Applies a gate stream with each run of single-qubit gates on a qubit
/// (including injected Paulis) folded into one matrix, applied when a
/// two-qubit gate needs the qubit or at the end.
class GateFuser {
   public:
    explicit GateFuser(StateVector &state) : state_(state), pending_(state.num_qubits()), has_(state.num_qubits(), 0) {
    }

    void one(uint32_t q, const Mat2 &m) {
        pending_[q] = has_[q] ? matmul(m, pending_[q]) : m;
        has_[q] = 1;
    }

    void gate(const Gate &g) {
        if (g.arity() == 1) {
            one(g.q0(), gate_matrix(g));
            return;
        }
        const uint32_t a = g.q0();
        const uint32_t b = g.q1();
        for (uint32_t q : {a, b}) {
            if (has_[q]) {
                state_.apply_matrix(pending_[q], q);
                has_[q] = 0;
            }
        }
        state_.apply_gate(g);
    }

    void flush() {
        for (uint32_t q = 0; q < has_.size(); q++) {
            if (has_[q]) {
                state_.apply_matrix(pending_[q], q);
                has_[q] = 0;
            }
        }
    }

   private:
    StateVector &state_;
    std::vector<Mat2> pending_;
    std::vector<uint8_t> has_;
};

}  // namespace

StateVector simulate_exact(const Circuit &c) {
    StateVector state(c.num_qubits());
    GateFuser fuser(state);
    for (const auto &g : c.gates()) {
        if (!is_unitary(g.kind)) {
            throw QcutError(ErrorCode::RequiresSampling,
                            "circuit '" + c.name() + "' contains " + gate_kind_name(g.kind) +
                                "; use the sampling or branching simulators");
        }
        fuser.gate(g);
    }
    fuser.flush();
    return state;
}

std::vector<Branch> enumerate_branches(const Circuit &c) {
    std::vector<Branch> branches;
    branches.push_back({1.0, 0, StateVector(c.num_qubits())});
    uint32_t n_measured = 0;
    for (const auto &g : c.gates()) {
        if (is_unitary(g.kind)) {
            for (auto &b : branches) {
                b.state.apply_gate(g);
            }
            continue;
        }
        const uint32_t q = g.q0();
        if (g.kind == GateKind::MeasureZ && n_measured >= 64) {
            throw QcutError(ErrorCode::InvalidArgument, "at most 64 measurements per circuit");
        }
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (auto &b : branches) {
            const auto probs = b.state.outcome_probabilities(q);
            for (int outcome : {0, 1}) {
                double p = probs[outcome];
                if (p <= kBranchFloor) {
                    continue;
                }
                Branch child{b.probability * p, b.outcomes, b.state};
                child.state.collapse(q, outcome, p);
                if (g.kind == GateKind::MeasureZ) {
                    child.outcomes |= uint64_t{static_cast<uint64_t>(outcome)} << n_measured;
                } else {
                    if (outcome) {
                        child.state.apply_pauli(q, 1);
                    }
                    apply_prep_gates(child.state, q, g.prep);
                }
                next.push_back(std::move(child));
            }
        }
        if (g.kind == GateKind::MeasureZ) {
            n_measured++;
        }
        branches = std::move(next);
    }
    return branches;
}

namespace {

void apply_gate_noise(StateVector &state, const Gate &g, const NoiseProfile &noise, Rng &rng) {
    if (g.arity() == 1) {
        if (noise.p1 > 0 && rng.bernoulli(noise.p1)) {
            state.apply_pauli(g.q0(), 1 + static_cast<int>(rng.below(3)));
        }
    } else if (noise.p2 > 0 && rng.bernoulli(noise.p2)) {
        state.apply_pauli(g.q0(), 1 + static_cast<int>(rng.below(3)));
        state.apply_pauli(g.q1(), 1 + static_cast<int>(rng.below(3)));
    }
}

bool measurements_all_terminal(const Circuit &c) {
    for (size_t k = 0; k < c.size(); k++) {
        const Gate &g = c[k];
        if (g.kind == GateKind::PrepState) {
            return false;
        }
        if (g.kind == GateKind::MeasureZ && !is_terminal_measurement(c, k)) {
            return false;
        }
    }
    return true;
}

uint64_t sample_index(std::span<const double> cumulative, Rng &rng) {
    double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        --it;
    }
    return static_cast<uint64_t>(it - cumulative.begin());
}

uint64_t read_out(uint64_t basis_index, std::span<const uint32_t> measured, double p_readout, Rng &rng) {
    uint64_t word = 0;
    for (size_t k = 0; k < measured.size(); k++) {
        uint64_t bit = (basis_index >> measured[k]) & 1;
        if (p_readout > 0 && rng.bernoulli(p_readout)) {
            bit ^= 1;
        }
        word |= bit << k;
    }
    return word;
}

// Error event: gate position, qubit and Pauli packed into one word so that
// sorting patterns orders them by the position of their first error. Events
// here act *before* the gate at that position.
inline uint64_t pack_event(size_t position, uint32_t q, int pauli) {
    return (uint64_t{position} << 24) | (uint64_t{q} << 2) | static_cast<uint64_t>(pauli);
}

inline int pauli_code(bool x, bool z) {
    return x ? (z ? 2 : 1) : (z ? 3 : 0);
}

/// Pushes sampled Pauli errors forward through the gates they commute with or
/// that map them to other Paulis (phases are irrelevant for sampling). Errors
/// that reach the end become classical flips of the readout; the others are
/// applied just before the first gate that would not let them through.
class PauliFrame {
   public:
    PauliFrame(uint32_t n, std::span<const Gate> gates, std::span<const uint32_t> measured)
        : x_(n, 0), z_(n, 0), gates_(gates), measured_(measured) {
    }

    /// `raw` holds (gate position, qubit, pauli) of errors occurring *after*
    /// their gate, in position order. Returns the flip mask over measurement
    /// ordinals; `events` receives the materialized errors.
    uint64_t push(std::span<const uint64_t> raw, std::vector<uint64_t> &events) {
        events.clear();
        if (raw.empty()) {
            return 0;
        }
        size_t r = 0;
        active_ = 0;
        for (size_t p = raw.front() >> 24; p < gates_.size(); p++) {
            if (p > (raw.front() >> 24) && active_ == 0 && r == raw.size()) {
                break;
            }
            if (active_ != 0 && p > (raw.front() >> 24)) {
                pass(p, events);
            }
            while (r < raw.size() && (raw[r] >> 24) == p) {
                const auto q = static_cast<uint32_t>((raw[r] >> 2) & 0x3FFFFF);
                const int pauli = static_cast<int>(raw[r] & 3);
                set(q, x_[q] ^ (pauli == 1 || pauli == 2), z_[q] ^ (pauli == 2 || pauli == 3));
                r++;
            }
        }
        uint64_t flips = 0;
        for (size_t k = 0; k < measured_.size(); k++) {
            if (x_[measured_[k]]) {
                flips |= uint64_t{1} << k;
            }
        }
        for (uint32_t q = 0; q < x_.size(); q++) {
            set(q, false, false);
        }
        return flips;
    }

   private:
    void set(uint32_t q, bool x, bool z) {
        const bool was = x_[q] || z_[q];
        const bool now = x || z;
        x_[q] = x;
        z_[q] = z;
        active_ += static_cast<int>(now) - static_cast<int>(was);
    }

    void materialize(size_t p, uint32_t q, std::vector<uint64_t> &events) {
        if (x_[q] || z_[q]) {
            events.push_back(pack_event(p, q, pauli_code(x_[q], z_[q])));
            set(q, false, false);
        }
    }

    /// Moves the frame from before gate p to after it.
    void pass(size_t p, std::vector<uint64_t> &events) {
        const Gate &g = gates_[p];
        const uint32_t a = g.q0();
        if (g.arity() == 1) {
            const bool x = x_[a];
            const bool z = z_[a];
            if (!x && !z) {
                return;
            }
            switch (g.kind) {
                case GateKind::H:
                    set(a, z, x);
                    break;
                case GateKind::S:
                case GateKind::Sdg:
                    set(a, x, z ^ x);
                    break;
                case GateKind::X:
                case GateKind::Y:
                case GateKind::Z:
                    break;
                case GateKind::T:
                case GateKind::Rz:
                    if (x) {
                        materialize(p, a, events);
                    }
                    break;
                case GateKind::Rx:
                    if (z) {
                        materialize(p, a, events);
                    }
                    break;
                case GateKind::Ry:
                    if (x != z) {
                        materialize(p, a, events);
                    }
                    break;
                default:
                    materialize(p, a, events);
            }
            return;
        }
        const uint32_t b = g.q1();
        const bool xa = x_[a], za = z_[a], xb = x_[b], zb = z_[b];
        if (!xa && !za && !xb && !zb) {
            return;
        }
        switch (g.kind) {
            case GateKind::CX:
                set(a, xa, za ^ zb);
                set(b, xb ^ xa, zb);
                break;
            case GateKind::CZ:
                set(a, xa, za ^ xb);
                set(b, xb, zb ^ xa);
                break;
            case GateKind::SWAP:
                set(a, xb, zb);
                set(b, xa, za);
                break;
            case GateKind::CP:
                if (xa) {
                    materialize(p, a, events);
                }
                if (xb) {
                    materialize(p, b, events);
                }
                break;
            default:
                materialize(p, a, events);
                materialize(p, b, events);
        }
    }

    std::vector<uint8_t> x_;
    std::vector<uint8_t> z_;
    std::span<const Gate> gates_;
    std::span<const uint32_t> measured_;
    int active_ = 0;
};

/// All measurements terminal: sample every shot's Pauli error pattern, push
/// it through the circuit, then simulate each distinct remaining pattern once.
/// Patterns are visited in order of their first error so a single noiseless
/// cursor state serves as the shared prefix.
std::vector<uint64_t> sample_grouped(const Circuit &c, const NoiseProfile &noise, uint64_t shots, Rng &rng) {
    std::vector<uint32_t> measured;
    std::vector<Gate> unitary;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::MeasureZ) {
            measured.push_back(g.q0());
        } else {
            unitary.push_back(g);
        }
    }

    PauliFrame frame(c.num_qubits(), unitary, measured);
    std::map<std::vector<uint64_t>, std::vector<uint64_t>> groups;
    std::vector<uint64_t> flips(shots, 0);
    std::vector<uint64_t> raw;
    std::vector<uint64_t> events;
    for (uint64_t s = 0; s < shots; s++) {
        raw.clear();
        for (size_t p = 0; p < unitary.size(); p++) {
            const Gate &g = unitary[p];
            if (g.arity() == 1) {
                if (noise.p1 > 0 && rng.bernoulli(noise.p1)) {
                    raw.push_back(pack_event(p, g.q0(), 1 + static_cast<int>(rng.below(3))));
                }
            } else if (noise.p2 > 0 && rng.bernoulli(noise.p2)) {
                raw.push_back(pack_event(p, g.q0(), 1 + static_cast<int>(rng.below(3))));
                raw.push_back(pack_event(p, g.q1(), 1 + static_cast<int>(rng.below(3))));
            }
        }
        flips[s] = frame.push(raw, events);
        groups[events].push_back(s);
    }

    std::vector<uint64_t> result(shots);
    StateVector cursor(c.num_qubits());
    size_t cursor_pos = 0;  // next gate the cursor has not applied
    std::vector<double> cumulative;

    auto sample_group = [&](const StateVector &state, const std::vector<uint64_t> &members) {
        auto amps = state.amplitudes();
        cumulative.resize(amps.size());
        double acc = 0;
        for (size_t i = 0; i < amps.size(); i++) {
            acc += std::norm(amps[i]);
            cumulative[i] = acc;
        }
        for (uint64_t s : members) {
            result[s] = read_out(sample_index(cumulative, rng), measured, noise.p_readout, rng) ^ flips[s];
        }
    };

    const std::vector<uint64_t> *noiseless_members = nullptr;
    for (const auto &[pattern, members] : groups) {
        if (pattern.empty()) {
            noiseless_members = &members;
            continue;
        }
        const size_t first = pattern.front() >> 24;
        while (cursor_pos < first) {
            cursor.apply_gate(unitary[cursor_pos++]);
        }
        StateVector state = cursor;
        GateFuser fuser(state);
        size_t e = 0;
        for (size_t p = cursor_pos; p < unitary.size(); p++) {
            while (e < pattern.size() && (pattern[e] >> 24) == p) {
                fuser.one(static_cast<uint32_t>((pattern[e] >> 2) & 0x3FFFFF),
                          pauli_matrix(static_cast<int>(pattern[e] & 3)));
                e++;
            }
            fuser.gate(unitary[p]);
        }
        fuser.flush();
        sample_group(state, members);
    }
    if (noiseless_members != nullptr) {
        while (cursor_pos < unitary.size()) {
            cursor.apply_gate(unitary[cursor_pos++]);
        }
        sample_group(cursor, *noiseless_members);
    }
    return result;
}

std::vector<uint64_t> sample_per_shot(const Circuit &c, const NoiseProfile &noise, uint64_t shots, Rng &rng) {
    std::vector<uint64_t> result(shots);
    for (uint64_t s = 0; s < shots; s++) {
        StateVector state(c.num_qubits());
        uint64_t word = 0;
        uint32_t n_measured = 0;
        for (const auto &g : c.gates()) {
            if (is_unitary(g.kind)) {
                state.apply_gate(g);
                apply_gate_noise(state, g, noise, rng);
                continue;
            }
            const uint32_t q = g.q0();
            const auto probs = state.outcome_probabilities(q);
            int outcome;
            if (probs[1] <= kBranchFloor) {
                outcome = 0;
            } else if (probs[0] <= kBranchFloor) {
                outcome = 1;
            } else {
                outcome = rng.uniform() < probs[1] ? 1 : 0;
            }
            double p = probs[outcome];
            if (p < 1.0) {
                state.collapse(q, outcome, p);
            }
            if (g.kind == GateKind::MeasureZ) {
                uint64_t reported = static_cast<uint64_t>(outcome);
                if (noise.p_readout > 0 && rng.bernoulli(noise.p_readout)) {
                    reported ^= 1;
                }
                word |= reported << n_measured++;
            } else {
                if (outcome) {
                    state.apply_pauli(q, 1);
                }
                apply_prep_gates(state, q, g.prep);
            }
        }
        result[s] = word;
    }
    return result;
}

}  // namespace

std::vector<uint64_t> sample_measurements(const Circuit &c, const NoiseProfile &noise, uint64_t shots,
                                          uint64_t seed) {
    if (shots == 0) {
        throw QcutError(ErrorCode::InvalidArgument, "shots must be positive");
    }
    noise.validate();
    size_t n_measure = std::count_if(c.gates().begin(), c.gates().end(), [](const Gate &g) {
        return g.kind == GateKind::MeasureZ;
    });
    if (n_measure > 64) {
        throw QcutError(ErrorCode::InvalidArgument, "at most 64 measurements per circuit");
    }
    Rng rng(seed);
    if (measurements_all_terminal(c)) {
        return sample_grouped(c, noise, shots, rng);
    }
    return sample_per_shot(c, noise, shots, rng);
}

Counts run_shots(const Circuit &c, const NoiseProfile &noise, uint64_t shots, uint64_t seed) {
    auto words = sample_measurements(c, noise, shots, seed);
    const uint32_t n = c.num_qubits();
    // Bit position inside each word holding the last measurement of each qubit.
    std::vector<int> slot(n, -1);
    int ordinal = 0;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::MeasureZ) {
            slot[g.q0()] = ordinal++;
        }
    }
    Counts counts;
    counts.total_shots = shots;
    for (uint32_t q = 0; q < n; q++) {
        if (slot[q] < 0) {
            counts.warnings.push_back("qubit " + std::to_string(q) + " is not measured; reported as 0");
        }
    }
    std::map<uint64_t, uint64_t> by_word;
    for (uint64_t w : words) {
        by_word[w]++;
    }
    for (const auto &[w, k] : by_word) {
        std::string bits(n, '0');
        for (uint32_t q = 0; q < n; q++) {
            if (slot[q] >= 0 && ((w >> slot[q]) & 1)) {
                bits[n - 1 - q] = '1';
            }
        }
        counts.counts[bits] += k;
    }
    return counts;
}

double expectation_from_counts(const Counts &counts, const Observable &obs) {
    if (counts.total_shots == 0) {
        throw QcutError(ErrorCode::InvalidArgument, "counts carry no shots");
    }
    for (const auto &term : obs.terms()) {
        for (char p : term.paulis) {
            if (p != 'I' && p != 'Z') {
                throw QcutError(ErrorCode::BasisMismatch,
                                "term " + term.paulis + " is not diagonal in the Z basis; rotate it first");
            }
        }
    }
    double total = 0;
    for (const auto &[bits, k] : counts.counts) {
        if (bits.size() != obs.num_qubits()) {
            throw QcutError(ErrorCode::Dimension, "bitstring width does not match the observable");
        }
        const size_t n = bits.size();
        double value = 0;
        for (const auto &term : obs.terms()) {
            int sign = 1;
            for (size_t q = 0; q < n; q++) {
                if (term.paulis[q] == 'Z' && bits[n - 1 - q] == '1') {
                    sign = -sign;
                }
            }
            value += term.coefficient * sign;
        }
        total += value * static_cast<double>(k);
    }
    return total / static_cast<double>(counts.total_shots);
}

}  // namespace qcut
