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

#include "qcut/circuit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "qcut/error.h"
#include "qcut/rng.h"

namespace qcut {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidWidth:
            return "invalid-width";
        case ErrorCode::InvalidArgument:
            return "invalid-argument";
        case ErrorCode::RequiresSampling:
            return "requires-sampling";
        case ErrorCode::BasisMismatch:
            return "basis-mismatch";
        case ErrorCode::Dimension:
            return "dimension";
        case ErrorCode::NoDecomposition:
            return "no-decomposition";
        case ErrorCode::WidthViolation:
            return "width-violation";
        case ErrorCode::InvalidPlan:
            return "invalid-plan";
        case ErrorCode::EmptyComparison:
            return "empty-comparison";
        case ErrorCode::Parse:
            return "parse";
    }
    return "unknown";
}

namespace {

struct KindName {
    GateKind kind;
    const char *name;
};

constexpr KindName kKindNames[] = {
    {GateKind::H, "H"},       {GateKind::X, "X"},         {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},       {GateKind::S, "S"},         {GateKind::Sdg, "SDG"},
    {GateKind::T, "T"},       {GateKind::Rx, "RX"},       {GateKind::Ry, "RY"},
    {GateKind::Rz, "RZ"},     {GateKind::CP, "CP"},       {GateKind::CX, "CX"},
    {GateKind::CZ, "CZ"},     {GateKind::SWAP, "SWAP"},   {GateKind::MeasureZ, "MEASURE"},
    {GateKind::PrepState, "PREP"},
};

constexpr const char *kPrepNames[] = {"zero", "one", "plus", "minus", "plus_i", "minus_i"};

std::string format_angle(double angle) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", angle);
    return buf;
}

}  // namespace

const char *gate_kind_name(GateKind kind) {
    for (const auto &kn : kKindNames) {
        if (kn.kind == kind) {
            return kn.name;
        }
    }
    return "?";
}

GateKind parse_gate_kind(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) {
        return static_cast<char>(std::toupper(c));
    });
    for (const auto &kn : kKindNames) {
        if (upper == kn.name) {
            return kn.kind;
        }
    }
    throw QcutError(ErrorCode::Parse, "unknown gate kind '" + std::string(name) + "'");
}

const char *prep_kind_name(PrepKind kind) {
    return kPrepNames[static_cast<int>(kind)];
}

PrepKind parse_prep_kind(std::string_view name) {
    for (int i = 0; i < 6; i++) {
        if (name == kPrepNames[i]) {
            return static_cast<PrepKind>(i);
        }
    }
    throw QcutError(ErrorCode::Parse, "unknown prepared state '" + std::string(name) + "'");
}

Gate Gate::one(GateKind kind, uint32_t q, double angle) {
    Gate g;
    g.kind = kind;
    g.qubits = {q, q};
    g.angle = is_parameterized(kind) ? angle : 0.0;
    return g;
}

Gate Gate::two(GateKind kind, uint32_t a, uint32_t b, double angle) {
    Gate g;
    g.kind = kind;
    g.qubits = {a, b};
    g.angle = is_parameterized(kind) ? angle : 0.0;
    return g;
}

Gate Gate::measure(uint32_t q) {
    return one(GateKind::MeasureZ, q);
}

Gate Gate::prepare(uint32_t q, PrepKind prep) {
    Gate g = one(GateKind::PrepState, q);
    g.prep = prep;
    return g;
}

Gate Gate::on(uint32_t a, uint32_t b) const {
    Gate g = *this;
    g.qubits = {a, arity() == 2 ? b : a};
    return g;
}

bool Gate::operator==(const Gate &other) const {
    if (kind != other.kind || qubits[0] != other.qubits[0]) {
        return false;
    }
    if (arity() == 2 && qubits[1] != other.qubits[1]) {
        return false;
    }
    if (is_parameterized(kind) && angle != other.angle) {
        return false;
    }
    return kind != GateKind::PrepState || prep == other.prep;
}

std::string Gate::str() const {
    std::string out = gate_kind_name(kind);
    out += ' ';
    out += std::to_string(qubits[0]);
    if (arity() == 2) {
        out += ' ';
        out += std::to_string(qubits[1]);
    }
    if (is_parameterized(kind)) {
        out += ' ';
        out += format_angle(angle);
    }
    if (kind == GateKind::PrepState) {
        out += ' ';
        out += prep_kind_name(prep);
    }
    return out;
}

Circuit::Circuit(uint32_t num_qubits, std::string name) : num_qubits_(num_qubits), name_(std::move(name)) {
    if (num_qubits == 0) {
        throw QcutError(ErrorCode::InvalidWidth, "circuit needs at least one qubit");
    }
}

Circuit &Circuit::append(const Gate &gate) {
    for (uint32_t k = 0; k < gate.arity(); k++) {
        if (gate.qubits[k] >= num_qubits_) {
            throw QcutError(ErrorCode::InvalidArgument,
                            "gate '" + gate.str() + "' addresses a qubit outside [0, " +
                                std::to_string(num_qubits_) + ")");
        }
    }
    if (gate.arity() == 2 && gate.qubits[0] == gate.qubits[1]) {
        throw QcutError(ErrorCode::InvalidArgument, "gate '" + gate.str() + "' repeats a qubit");
    }
    if (!is_parameterized(gate.kind) && gate.angle != 0.0) {
        throw QcutError(ErrorCode::InvalidArgument, "gate '" + gate.str() + "' takes no angle");
    }
    if (gate.kind != GateKind::PrepState && gate.prep != PrepKind::Zero) {
        throw QcutError(ErrorCode::InvalidArgument, "only PREP carries a prepared state");
    }
    Gate g = gate;
    if (g.arity() == 1) {
        g.qubits[1] = g.qubits[0];
    }
    gates_.push_back(g);
    return *this;
}

Circuit &Circuit::append(const Circuit &fragment) {
    for (const auto &g : fragment.gates()) {
        append(g);
    }
    return *this;
}

size_t Circuit::count_two_qubit_gates() const {
    return std::count_if(gates_.begin(), gates_.end(), [](const Gate &g) {
        return is_two_qubit(g.kind);
    });
}

bool Circuit::has_measurements() const {
    return std::any_of(gates_.begin(), gates_.end(), [](const Gate &g) {
        return g.kind == GateKind::MeasureZ;
    });
}

std::string Circuit::to_text() const {
    std::string out = "qubits " + std::to_string(num_qubits_) + "\n";
    if (!name_.empty()) {
        out += "# name: " + name_ + "\n";
    }
    for (const auto &g : gates_) {
        out += g.str();
        out += '\n';
    }
    return out;
}

Circuit Circuit::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    std::optional<Circuit> circuit;
    std::string name;
    auto fail = [&](const std::string &why) {
        throw QcutError(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        line_no++;
        if (line.rfind("# name: ", 0) == 0) {
            name = line.substr(8);
            continue;
        }
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        auto to_u32 = [&](const std::string &s) {
            uint32_t v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size()) {
                fail("expected a qubit index, got '" + s + "'");
            }
            return v;
        };
        if (!circuit) {
            if (tok.size() != 2 || tok[0] != "qubits") {
                fail("expected header 'qubits N'");
            }
            circuit.emplace(to_u32(tok[1]));
            continue;
        }
        GateKind kind{};
        try {
            kind = parse_gate_kind(tok[0]);
        } catch (const QcutError &e) {
            fail(e.what());
        }
        size_t expected = 1 + (is_two_qubit(kind) ? 2 : 1) +
                          ((is_parameterized(kind) || kind == GateKind::PrepState) ? 1 : 0);
        if (tok.size() != expected) {
            fail("wrong field count for " + tok[0]);
        }
        Gate g;
        if (is_two_qubit(kind)) {
            g = Gate::two(kind, to_u32(tok[1]), to_u32(tok[2]));
        } else {
            g = Gate::one(kind, to_u32(tok[1]));
        }
        if (is_parameterized(kind)) {
            try {
                size_t used = 0;
                g.angle = std::stod(tok.back(), &used);
                if (used != tok.back().size()) {
                    fail("bad angle '" + tok.back() + "'");
                }
            } catch (const std::logic_error &) {
                fail("bad angle '" + tok.back() + "'");
            }
        }
        try {
            if (kind == GateKind::PrepState) {
                g.prep = parse_prep_kind(tok.back());
            }
            circuit->append(g);
        } catch (const QcutError &e) {
            fail(e.what());
        }
    }
    if (!circuit) {
        throw QcutError(ErrorCode::Parse, "missing 'qubits N' header");
    }
    Circuit result(circuit->num_qubits(), name);
    result.append(*circuit);
    return result;
}

bool Circuit::operator==(const Circuit &other) const {
    return num_qubits_ == other.num_qubits_ && gates_ == other.gates_;
}

std::ostream &operator<<(std::ostream &out, const Circuit &c) {
    return out << c.to_text();
}

Circuit ghz_circuit(uint32_t n) {
    if (n < 2) {
        throw QcutError(ErrorCode::InvalidWidth, "GHZ circuit needs n >= 2");
    }
    Circuit c(n, "ghz_" + std::to_string(n));
    c.append(Gate::one(GateKind::H, 0));
    for (uint32_t i = 0; i + 1 < n; i++) {
        c.append(Gate::two(GateKind::CX, i, i + 1));
    }
    return c;
}

Circuit qft_circuit(uint32_t n) {
    if (n < 1) {
        throw QcutError(ErrorCode::InvalidWidth, "QFT circuit needs n >= 1");
    }
    Circuit c(n, "qft_" + std::to_string(n));
    for (uint32_t k = 0; k < n; k++) {
        c.append(Gate::one(GateKind::H, k));
        for (uint32_t j = k + 1; j < n; j++) {
            c.append(Gate::two(GateKind::CP, j, k, std::numbers::pi / std::ldexp(1.0, j - k)));
        }
    }
    for (uint32_t i = 0; i < n / 2; i++) {
        c.append(Gate::two(GateKind::SWAP, i, n - 1 - i));
    }
    return c;
}

namespace {

void check_layered_args(uint32_t n, uint32_t depth, const char *family) {
    if (n < 2) {
        throw QcutError(ErrorCode::InvalidWidth, std::string(family) + " circuit needs n >= 2");
    }
    if (depth < 1) {
        throw QcutError(ErrorCode::InvalidArgument, std::string(family) + " circuit needs depth >= 1");
    }
}

double random_angle(Rng &rng) {
    return 2.0 * std::numbers::pi * rng.uniform();
}

}  // namespace

Circuit brickwork_circuit(uint32_t n, uint32_t depth, uint64_t seed) {
    check_layered_args(n, depth, "brickwork");
    Circuit c(n, "brickwork_" + std::to_string(n) + "_" + std::to_string(depth) + "_" + std::to_string(seed));
    Rng rng(seed);
    for (uint32_t layer = 0; layer < depth; layer++) {
        for (uint32_t q = 0; q < n; q++) {
            c.append(Gate::one(GateKind::Rz, q, random_angle(rng)));
            c.append(Gate::one(GateKind::Ry, q, random_angle(rng)));
            c.append(Gate::one(GateKind::Rz, q, random_angle(rng)));
        }
        for (uint32_t a = layer % 2; a + 1 < n; a += 2) {
            c.append(Gate::two(GateKind::CZ, a, a + 1));
        }
    }
    return c;
}

Circuit random_circuit(uint32_t n, uint32_t depth, uint64_t seed) {
    check_layered_args(n, depth, "random");
    static constexpr GateKind kSingle[] = {GateKind::H,  GateKind::S,  GateKind::T,
                                           GateKind::Rx, GateKind::Ry, GateKind::Rz};
    Circuit c(n, "random_" + std::to_string(n) + "_" + std::to_string(depth) + "_" + std::to_string(seed));
    Rng rng(seed);
    for (uint32_t layer = 0; layer < depth; layer++) {
        for (uint32_t q = 0; q < n; q++) {
            GateKind kind = kSingle[rng.below(6)];
            double angle = is_parameterized(kind) ? random_angle(rng) : 0.0;
            c.append(Gate::one(kind, q, angle));
        }
        for (uint32_t a = layer % 2; a + 1 < n; a += 2) {
            GateKind kind = rng.below(2) == 0 ? GateKind::CX : GateKind::CZ;
            c.append(Gate::two(kind, a, a + 1));
        }
    }
    return c;
}

bool is_terminal_measurement(const Circuit &c, size_t index) {
    const Gate &m = c[index];
    if (m.kind != GateKind::MeasureZ) {
        return false;
    }
    for (size_t k = index + 1; k < c.size(); k++) {
        if (c[k].touches(m.q0())) {
            return false;
        }
    }
    return true;
}

Circuit strip_measurements(const Circuit &c) {
    Circuit out(c.num_qubits(), c.name());
    for (size_t k = 0; k < c.size(); k++) {
        if (!is_terminal_measurement(c, k)) {
            out.append(c[k]);
        }
    }
    return out;
}

InteractionGraph interaction_graph(const Circuit &c) {
    InteractionGraph graph;
    graph.num_vertices = c.num_qubits();
    for (size_t k = 0; k < c.size(); k++) {
        const Gate &g = c[k];
        if (!is_two_qubit(g.kind)) {
            continue;
        }
        uint32_t a = std::min(g.q0(), g.q1());
        uint32_t b = std::max(g.q0(), g.q1());
        auto it = std::find_if(graph.edges.begin(), graph.edges.end(), [&](const InteractionEdge &e) {
            return e.a == a && e.b == b;
        });
        if (it == graph.edges.end()) {
            graph.edges.push_back({a, b, {k}});
        } else {
            it->gate_indices.push_back(k);
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const InteractionEdge &x, const InteractionEdge &y) {
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    return graph;
}

}  // namespace qcut
