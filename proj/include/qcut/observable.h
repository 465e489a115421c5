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

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "qcut/circuit.h"

namespace qcut {

class StateVector;

/// Weighted tensor product of Paulis. Character i of `paulis` acts on qubit i
/// (the leftmost character is qubit 0; note this is the reverse of how
/// bitstrings are written in Counts).
struct PauliString {
    std::string paulis;
    double coefficient = 1.0;

    uint32_t num_qubits() const {
        return static_cast<uint32_t>(paulis.size());
    }
    bool is_diagonal() const;
    /// Same string with every X/Y replaced by Z.
    std::string z_mapped() const;

    bool operator==(const PauliString &) const = default;
};

class Observable {
   public:
    Observable(std::vector<PauliString> terms, std::string name = "");

    const std::vector<PauliString> &terms() const {
        return terms_;
    }
    const std::string &name() const {
        return name_;
    }
    uint32_t num_qubits() const {
        return terms_.front().num_qubits();
    }
    double coefficient_norm() const;

    /// Compact text form, e.g. `0.5*ZI + 0.5*IZ`.
    std::string str() const;
    static Observable parse(std::string_view text, std::string name = "");

    bool operator==(const Observable &other) const {
        return terms_ == other.terms_;
    }

   private:
    std::vector<PauliString> terms_;
    std::string name_;
};

Observable z_magnetization(uint32_t n);
std::vector<Observable> ghz_stabilizers(uint32_t n);

/// <psi|P|psi> for a single Pauli string (coefficient ignored).
std::complex<double> pauli_expectation(const StateVector &state, std::string_view paulis);

/// Exact <psi|O|psi>; throws if the imaginary residue exceeds 1e-10.
double ideal_expectation(const StateVector &state, const Observable &obs);

/// Basis change that maps the term onto Z measurements: X -> H, Y -> Sdg H.
Circuit measurement_rotation(const PauliString &term);

}  // namespace qcut
