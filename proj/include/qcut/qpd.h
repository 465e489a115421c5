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
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qcut/circuit.h"
#include "qcut/observable.h"
#include "qcut/simulator.h"

namespace qcut {

struct CutLocation {
    enum class Kind : uint8_t { Gate, Wire };

    Kind kind = Kind::Gate;
    /// Gate cut: the cut two-qubit gate. Wire cut: the gate after which the
    /// wire of `qubit` is severed.
    size_t gate_index = 0;
    uint32_t qubit = 0;

    static CutLocation gate(size_t index) {
        return {Kind::Gate, index, 0};
    }
    static CutLocation wire(uint32_t qubit, size_t after_gate) {
        return {Kind::Wire, after_gate, qubit};
    }

    std::string str() const;
    auto operator<=>(const CutLocation &) const = default;
};

/// One local replacement for a cut. Fragment gates address qubit 0, standing
/// for the endpoint they are placed on. A MeasureZ inside a fragment is a
/// sign-carrying measurement: its +/-1 outcome multiplies the estimate.
struct QpdTerm {
    double coefficient = 0.0;
    std::vector<Gate> left_ops;
    std::vector<Gate> right_ops;
};

struct QpdBasis {
    std::vector<QpdTerm> terms;

    double one_norm() const;
};

/// Gate-cut decomposition for CZ, CX, CP(angle) and SWAP (as three CX cuts).
QpdBasis gate_cut_basis(GateKind kind, double angle = 0.0);
/// Eight measure-and-prepare terms realizing the single-qubit identity channel.
QpdBasis wire_cut_basis();

constexpr double kGateCutBase = 9.0;
constexpr double kWireCutBase = 16.0;
inline constexpr const char *kWireScalingNote =
    "wire-cut sampling overhead is often quoted as O(4^n); 4 is the per-cut 1-norm, 16 its square "
    "(the sampling cost used for budget screening)";

/// Product of per-cut bases: 9 per gate cut, 16 per wire cut.
double estimate_overhead(std::span<const CutLocation> locations);
/// Same, except that a cut SWAP counts as the three CX cuts it is built from.
double estimate_overhead(const Circuit &c, std::span<const CutLocation> locations);
/// Number of elementary cuts (a SWAP gate cut counts three).
uint32_t elementary_cut_count(const Circuit &c, std::span<const CutLocation> locations);

struct CutPlan {
    std::vector<CutLocation> locations;
    /// Qubit sets per subcircuit. Indices >= circuit width name the wire
    /// segments created by wire cuts, numbered in cut order.
    std::vector<std::vector<uint32_t>> partitions;
    double overhead_estimate = 1.0;
    uint64_t n_subexperiments = 1;

    size_t max_width() const;
    size_t min_width() const;
    bool empty() const {
        return locations.empty() && partitions.size() <= 1;
    }
};

/// Connected components of the register after applying the cuts, ordered by
/// smallest member.
std::vector<std::vector<uint32_t>> cut_components(const Circuit &c, std::span<const CutLocation> locations);

/// Plan whose partitions are the components left by `locations`.
CutPlan make_plan(const Circuit &c, std::vector<CutLocation> locations);
/// Plan with explicit partitions (each a union of components).
CutPlan make_plan(const Circuit &c, std::vector<CutLocation> locations,
                  std::vector<std::vector<uint32_t>> partitions);

struct ExactMode {};
/// Importance sampling of term combinations with probability |c|/kappa. When
/// `n_samples` covers every combination and `exact_if_covered` is set, all
/// combinations are used once with their exact coefficients instead.
struct SampledMode {
    uint32_t n_samples = 100;
    uint64_t seed = 0;
    bool exact_if_covered = true;
};
using SamplingMode = std::variant<ExactMode, SampledMode>;

/// One partition's circuit for one choice of cut terms (a "group").
struct Subexperiment {
    Circuit circuit{1};
    /// Signed weight shared by every partition of the group.
    double weight = 0.0;
    std::vector<uint32_t> term_indices;
    uint32_t partition = 0;
    uint32_t group = 0;
    /// Local qubit -> register qubit (including wire segments).
    std::vector<uint32_t> qubits;
    /// Local qubit -> original qubit it carries at the end, or -1.
    std::vector<int32_t> observed;
    /// Measurement ordinals whose outcomes carry a QPD sign.
    std::vector<uint32_t> sign_slots;
    /// Local qubit -> ordinal of its terminal measurement, or -1.
    std::vector<int32_t> observed_slots;
    /// Number of trailing terminal MeasureZ gates.
    uint32_t n_terminal = 0;

    /// The circuit without its trailing terminal measurements.
    Circuit body() const;
};

struct SubexperimentSet {
    /// Group-major: entry g * n_partitions + p.
    std::vector<Subexperiment> subexperiments;
    std::vector<double> group_weights;
    uint32_t n_groups = 0;
    uint32_t n_partitions = 0;
    uint32_t original_width = 0;

    const Subexperiment &at(uint32_t group, uint32_t partition) const {
        return subexperiments[static_cast<size_t>(group) * n_partitions + partition];
    }
};

SubexperimentSet generate_subexperiments(const Circuit &c, const CutPlan &plan, const SamplingMode &mode,
                                         uint32_t q_max = std::numeric_limits<uint32_t>::max());

/// Produces E[sign * eigenvalue] per local Pauli string for one subexperiment.
class SubexperimentEstimator {
   public:
    virtual ~SubexperimentEstimator() = default;
    virtual std::vector<double> estimate(const Subexperiment &sub, size_t index,
                                         std::span<const std::string> local_terms) = 0;
};

/// Noiseless and exact; forks on sign-carrying measurements.
class ExactEstimator : public SubexperimentEstimator {
   public:
    std::vector<double> estimate(const Subexperiment &sub, size_t index,
                                 std::span<const std::string> local_terms) override;
};

/// Finite-shot estimates from the trajectory simulator. Terms sharing a
/// measurement basis share one execution.
class ShotEstimator : public SubexperimentEstimator {
   public:
    ShotEstimator(NoiseProfile noise, uint64_t shots, uint64_t seed)
        : noise_(noise), shots_(shots), seed_(seed) {
    }
    std::vector<double> estimate(const Subexperiment &sub, size_t index,
                                 std::span<const std::string> local_terms) override;

    uint64_t total_shots() const {
        return total_shots_;
    }
    uint64_t executions() const {
        return executions_;
    }

   private:
    NoiseProfile noise_;
    uint64_t shots_;
    uint64_t seed_;
    uint64_t total_shots_ = 0;
    uint64_t executions_ = 0;
};

/// Signed weighted sum with compensated summation.
double reconstruct_expectation(std::span<const double> results, std::span<const double> weights);

/// Reconstructed expectation of each observable over the original register.
std::vector<double> reconstruct_observables(const SubexperimentSet &set, std::span<const Observable> observables,
                                            SubexperimentEstimator &estimator);

/// Exact reconstructed output distribution over the original register,
/// indexed little-endian. Noiseless.
std::vector<double> reconstruct_distribution(const SubexperimentSet &set);

}  // namespace qcut
