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

#include "qcut/observable.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qcut/error.h"
#include "qcut/simulator.h"

namespace qcut {

bool PauliString::is_diagonal() const {
    return paulis.find_first_of("XY") == std::string::npos;
}

std::string PauliString::z_mapped() const {
    std::string out = paulis;
    for (char &c : out) {
        if (c == 'X' || c == 'Y') {
            c = 'Z';
        }
    }
    return out;
}

Observable::Observable(std::vector<PauliString> terms, std::string name)
    : terms_(std::move(terms)), name_(std::move(name)) {
    if (terms_.empty()) {
        throw QcutError(ErrorCode::InvalidArgument, "observable needs at least one term");
    }
    const size_t n = terms_.front().paulis.size();
    for (const auto &t : terms_) {
        if (t.paulis.size() != n || n == 0) {
            throw QcutError(ErrorCode::Dimension, "observable terms must share one non-zero length");
        }
        if (t.paulis.find_first_not_of("IXYZ") != std::string::npos) {
            throw QcutError(ErrorCode::Parse, "invalid Pauli string '" + t.paulis + "'");
        }
    }
}

double Observable::coefficient_norm() const {
    double total = 0;
    for (const auto &t : terms_) {
        total += std::abs(t.coefficient);
    }
    return total;
}

std::string Observable::str() const {
    std::string out;
    char buf[40];
    for (size_t k = 0; k < terms_.size(); k++) {
        if (k > 0) {
            out += " + ";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", terms_[k].coefficient);
        out += buf;
        out += '*';
        out += terms_[k].paulis;
    }
    return out;
}

Observable Observable::parse(std::string_view text, std::string name) {
    std::vector<PauliString> terms;
    std::string s(text);
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t plus = s.find(" + ", pos);
        std::string piece = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        // trim
        size_t a = piece.find_first_not_of(' ');
        size_t b = piece.find_last_not_of(' ');
        if (a == std::string::npos) {
            throw QcutError(ErrorCode::Parse, "empty observable term in '" + s + "'");
        }
        piece = piece.substr(a, b - a + 1);
        PauliString term;
        size_t star = piece.find('*');
        if (star == std::string::npos) {
            term.paulis = piece;
        } else {
            try {
                size_t used = 0;
                term.coefficient = std::stod(piece.substr(0, star), &used);
                if (used != star) {
                    throw std::invalid_argument("trailing");
                }
            } catch (const std::logic_error &) {
                throw QcutError(ErrorCode::Parse, "bad coefficient in term '" + piece + "'");
            }
            term.paulis = piece.substr(star + 1);
        }
        terms.push_back(term);
        if (plus == std::string::npos) {
            break;
        }
        pos = plus + 3;
    }
    return Observable(std::move(terms), std::move(name));
}

Observable z_magnetization(uint32_t n) {
    if (n < 1) {
        throw QcutError(ErrorCode::InvalidWidth, "z_magnetization needs n >= 1");
    }
    std::vector<PauliString> terms;
    for (uint32_t i = 0; i < n; i++) {
        std::string p(n, 'I');
        p[i] = 'Z';
        terms.push_back({p, 1.0 / n});
    }
    return Observable(std::move(terms), "z_magnetization");
}

std::vector<Observable> ghz_stabilizers(uint32_t n) {
    if (n < 2) {
        throw QcutError(ErrorCode::InvalidWidth, "ghz_stabilizers needs n >= 2");
    }
    std::vector<Observable> out;
    out.emplace_back(std::vector<PauliString>{{std::string(n, 'X'), 1.0}}, "x_parity");
    for (uint32_t i = 0; i + 1 < n; i++) {
        std::string p(n, 'I');
        p[i] = 'Z';
        p[i + 1] = 'Z';
        out.emplace_back(std::vector<PauliString>{{p, 1.0}}, "zz_" + std::to_string(i));
    }
    return out;
}

std::complex<double> pauli_expectation(const StateVector &state, std::string_view paulis) {
    const uint32_t n = state.num_qubits();
    if (paulis.size() != n) {
        throw QcutError(ErrorCode::Dimension, "Pauli string length " + std::to_string(paulis.size()) +
                                                  " does not match state width " + std::to_string(n));
    }
    uint64_t x_mask = 0;
    uint64_t z_mask = 0;
    int y_count = 0;
    for (uint32_t q = 0; q < n; q++) {
        switch (paulis[q]) {
            case 'X':
                x_mask |= uint64_t{1} << q;
                break;
            case 'Y':
                x_mask |= uint64_t{1} << q;
                z_mask |= uint64_t{1} << q;
                y_count++;
                break;
            case 'Z':
                z_mask |= uint64_t{1} << q;
                break;
            default:
                break;
        }
    }
    // P|i> = i^{#Y} (-1)^{popcount(i & z_mask)} |i ^ x_mask>, with Y = i X Z.
    static const std::complex<double> kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> global = kPow[y_count % 4];
    auto amps = state.amplitudes();
    std::complex<double> total = 0;
    for (uint64_t i = 0; i < amps.size(); i++) {
        double sign = (__builtin_popcountll(i & z_mask) & 1) ? -1.0 : 1.0;
        total += std::conj(amps[i ^ x_mask]) * amps[i] * sign;
    }
    return total * global;
}

double ideal_expectation(const StateVector &state, const Observable &obs) {
    if (obs.num_qubits() != state.num_qubits()) {
        throw QcutError(ErrorCode::Dimension, "observable width does not match state width");
    }
    std::complex<double> total = 0;
    for (const auto &t : obs.terms()) {
        total += t.coefficient * pauli_expectation(state, t.paulis);
    }
    if (std::abs(total.imag()) > 1e-10) {
        throw QcutError(ErrorCode::InvalidArgument, "expectation has a non-negligible imaginary part");
    }
    return total.real();
}

Circuit measurement_rotation(const PauliString &term) {
    Circuit frag(term.num_qubits(), "rotation_" + term.paulis);
    for (uint32_t q = 0; q < term.num_qubits(); q++) {
        if (term.paulis[q] == 'X') {
            frag.append(Gate::one(GateKind::H, q));
        } else if (term.paulis[q] == 'Y') {
            frag.append(Gate::one(GateKind::Sdg, q));
            frag.append(Gate::one(GateKind::H, q));
        }
    }
    return frag;
}

}  // namespace qcut
