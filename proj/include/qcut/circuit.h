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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qcut {

enum class GateKind : uint8_t {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Rx,
    Ry,
    Rz,
    CP,
    CX,
    CZ,
    SWAP,
    MeasureZ,
    PrepState,
};

/// Single-qubit states a PrepState gate can (re)initialize a qubit to.
enum class PrepKind : uint8_t { Zero, One, Plus, Minus, PlusI, MinusI };

const char *gate_kind_name(GateKind kind);
GateKind parse_gate_kind(std::string_view name);
const char *prep_kind_name(PrepKind kind);
PrepKind parse_prep_kind(std::string_view name);

constexpr bool is_two_qubit(GateKind kind) {
    return kind == GateKind::CP || kind == GateKind::CX || kind == GateKind::CZ ||
           kind == GateKind::SWAP;
}

constexpr bool is_parameterized(GateKind kind) {
    return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz ||
           kind == GateKind::CP;
}

constexpr bool is_unitary(GateKind kind) {
    return kind != GateKind::MeasureZ && kind != GateKind::PrepState;
}

struct Gate {
    GateKind kind = GateKind::H;
    std::array<uint32_t, 2> qubits{0, 0};
    double angle = 0.0;
    PrepKind prep = PrepKind::Zero;

    uint32_t arity() const {
        return is_two_qubit(kind) ? 2 : 1;
    }
    uint32_t q0() const {
        return qubits[0];
    }
    uint32_t q1() const {
        return qubits[1];
    }
    bool touches(uint32_t q) const {
        return qubits[0] == q || (arity() == 2 && qubits[1] == q);
    }

    static Gate one(GateKind kind, uint32_t q, double angle = 0.0);
    static Gate two(GateKind kind, uint32_t a, uint32_t b, double angle = 0.0);
    static Gate measure(uint32_t q);
    static Gate prepare(uint32_t q, PrepKind prep);

    /// Same gate acting on remapped qubits.
    Gate on(uint32_t a, uint32_t b = 0) const;

    std::string str() const;

    bool operator==(const Gate &other) const;
};

/// Ordered gate list over a fixed register. Qubit 0 is the least significant
/// bit of every basis-state index.
class Circuit {
   public:
    explicit Circuit(uint32_t num_qubits, std::string name = "");

    /// Appends after validating qubit range, distinctness and the angle rule.
    Circuit &append(const Gate &gate);
    Circuit &append(const Circuit &fragment);

    uint32_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }
    const std::string &name() const {
        return name_;
    }
    size_t size() const {
        return gates_.size();
    }
    const Gate &operator[](size_t i) const {
        return gates_[i];
    }

    size_t count_two_qubit_gates() const;
    bool has_measurements() const;

    /// Line format: `qubits N`, then one `KIND q0 [q1] [angle|prep]` per line.
    std::string to_text() const;
    static Circuit from_text(std::string_view text);

    bool operator==(const Circuit &other) const;

   private:
    uint32_t num_qubits_;
    std::vector<Gate> gates_;
    std::string name_;
};

std::ostream &operator<<(std::ostream &out, const Circuit &c);

Circuit ghz_circuit(uint32_t n);
Circuit qft_circuit(uint32_t n);
Circuit brickwork_circuit(uint32_t n, uint32_t depth, uint64_t seed);
Circuit random_circuit(uint32_t n, uint32_t depth, uint64_t seed);

/// Drops MeasureZ gates that have no later gate on their qubit.
Circuit strip_measurements(const Circuit &c);

/// True when gate `index` is a MeasureZ with nothing after it on its qubit.
bool is_terminal_measurement(const Circuit &c, size_t index);

struct InteractionEdge {
    uint32_t a;
    uint32_t b;
    std::vector<size_t> gate_indices;

    bool operator==(const InteractionEdge &) const = default;
};

struct InteractionGraph {
    uint32_t num_vertices = 0;
    std::vector<InteractionEdge> edges;
};

/// One edge per qubit pair (a < b) carrying at least one two-qubit gate.
InteractionGraph interaction_graph(const Circuit &c);

}  // namespace qcut
