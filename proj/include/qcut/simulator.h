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
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qcut/circuit.h"

namespace qcut {

class Observable;
class Rng;

using Complex = std::complex<double>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<Complex, 4>;

/// Matrix of a single-qubit unitary gate kind.
Mat2 gate_matrix(const Gate &gate);

/// Dense state over n qubits; amplitude index bit q is qubit q (little-endian).
class StateVector {
   public:
    explicit StateVector(uint32_t num_qubits);

    uint32_t num_qubits() const {
        return num_qubits_;
    }
    std::span<const Complex> amplitudes() const {
        return amps_;
    }
    Complex amplitude(uint64_t index) const {
        return amps_[index];
    }
    double norm_squared() const;

    void apply_matrix(const Mat2 &m, uint32_t q);
    void apply_cx(uint32_t control, uint32_t target);
    void apply_cz(uint32_t a, uint32_t b);
    void apply_cp(uint32_t a, uint32_t b, double angle);
    void apply_swap(uint32_t a, uint32_t b);
    /// Applies X (1), Y (2) or Z (3) to qubit q.
    void apply_pauli(uint32_t q, int pauli);
    /// Unitary gates only; MeasureZ/PrepState are handled by the callers.
    void apply_gate(const Gate &gate);

    double probability_one(uint32_t q) const;
    /// {P(0), P(1)} for qubit q, each summed from its own amplitudes and
    /// normalized by their total (so a vanishing outcome stays exactly 0).
    std::array<double, 2> outcome_probabilities(uint32_t q) const;
    /// Projects qubit q onto `outcome` and renormalizes. `probability` is the
    /// pre-measurement probability of that outcome.
    void collapse(uint32_t q, int outcome, double probability);

   private:
    uint32_t num_qubits_;
    std::vector<Complex> amps_;
};

struct NoiseProfile {
    double p1 = 0.0003;
    double p2 = 0.008;
    double p_readout = 0.02;

    static NoiseProfile noiseless() {
        return {0.0, 0.0, 0.0};
    }
    void validate() const;
    bool is_noiseless() const {
        return p1 == 0.0 && p2 == 0.0 && p_readout == 0.0;
    }
};

/// Histogram over little-endian bitstrings: character n-1-q holds qubit q.
struct Counts {
    std::map<std::string, uint64_t> counts;
    uint64_t total_shots = 0;
    std::vector<std::string> warnings;
};

/// One measurement branch of a circuit with mid-circuit MeasureZ gates.
/// Bit k of `outcomes` is the result of the k-th MeasureZ in program order.
struct Branch {
    double probability;
    uint64_t outcomes;
    StateVector state;
};

/// Exact final state from |0...0>. Rejects MeasureZ and PrepState.
StateVector simulate_exact(const Circuit &c);

/// Exact evolution that forks on every MeasureZ (and on PrepState applied to a
/// qubit that is not in a Z eigenstate). Branches with zero probability are
/// dropped. Noiseless.
std::vector<Branch> enumerate_branches(const Circuit &c);

/// Per-shot stochastic-Pauli trajectories. Returns one packed outcome word per
/// shot; bit k is the reported result of the k-th MeasureZ in program order.
/// Readout flips apply to every reported bit.
std::vector<uint64_t> sample_measurements(const Circuit &c, const NoiseProfile &noise, uint64_t shots,
                                          uint64_t seed);

/// Terminal-bit histogram built from `sample_measurements`.
Counts run_shots(const Circuit &c, const NoiseProfile &noise, uint64_t shots, uint64_t seed);

/// Z-basis estimate of a diagonal (I/Z only) observable from counts.
double expectation_from_counts(const Counts &counts, const Observable &obs);

}  // namespace qcut
