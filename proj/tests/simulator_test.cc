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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "oracle.h"
#include "qcut/circuit.h"
#include "qcut/error.h"
#include "qcut/observable.h"
#include "qcut/rng.h"
#include "qcut/simulator.h"

namespace qcut {
namespace {

using oracle::C;
using oracle::Matrix;

// Exact distribution over packed measurement words for the stochastic Pauli
// model, by density-matrix evolution that keeps one operator per record.
std::map<uint64_t, double> noisy_word_distribution(const Circuit &c, const NoiseProfile &noise) {
    const uint32_t n = c.num_qubits();
    const size_t d = size_t{1} << n;
    Matrix start(d);
    start(0, 0) = 1.0;
    std::map<uint64_t, Matrix> records{{0, start}};
    const GateKind paulis[] = {GateKind::X, GateKind::Y, GateKind::Z};
    uint32_t ordinal = 0;
    for (const auto &g : c.gates()) {
        std::map<uint64_t, Matrix> next;
        for (auto &[word, rho] : records) {
            oracle::Density dm{n, rho};
            if (g.kind == GateKind::MeasureZ) {
                oracle::Density zero = dm;
                oracle::Density one = dm;
                Matrix p0 = oracle::embed1(oracle::mat2(1, 0, 0, 0), g.q0(), n);
                Matrix p1 = oracle::embed1(oracle::mat2(0, 0, 0, 1), g.q0(), n);
                zero.rho = p0 * dm.rho * p0;
                one.rho = p1 * dm.rho * p1;
                const double pr = noise.p_readout;
                for (uint64_t bit : {0ull, 1ull}) {
                    const Matrix &kept = bit ? one.rho : zero.rho;
                    const Matrix &flipped = bit ? zero.rho : one.rho;
                    next.emplace(word | (bit << ordinal), oracle::scale(kept, 1 - pr) + oracle::scale(flipped, pr));
                }
                continue;
            }
            dm.gate(g);
            if (g.kind != GateKind::PrepState) {
                const double p = g.arity() == 1 ? noise.p1 : noise.p2;
                Matrix mixed = oracle::scale(dm.rho, 1 - p);
                if (g.arity() == 1) {
                    for (auto k : paulis) {
                        Matrix u = oracle::embed1(oracle::single_qubit(k, 0), g.q0(), n);
                        mixed = mixed + oracle::scale(u * dm.rho * oracle::dagger(u), p / 3);
                    }
                } else {
                    for (auto ka : paulis) {
                        for (auto kb : paulis) {
                            Matrix u = oracle::embed1(oracle::single_qubit(ka, 0), g.q0(), n) *
                                       oracle::embed1(oracle::single_qubit(kb, 0), g.q1(), n);
                            mixed = mixed + oracle::scale(u * dm.rho * oracle::dagger(u), p / 9);
                        }
                    }
                }
                dm.rho = mixed;
            }
            next.emplace(word, dm.rho);
        }
        if (g.kind == GateKind::MeasureZ) {
            ordinal++;
        }
        records = std::move(next);
    }
    std::map<uint64_t, double> dist;
    for (const auto &[word, rho] : records) {
        double tr = 0;
        for (size_t i = 0; i < d; i++) {
            tr += rho(i, i).real();
        }
        dist[word] += tr;
    }
    return dist;
}

// Pearson statistic against the oracle; bins with expectation < 5 are pooled.
// Returns the statistic divided by a conservative (p ~ 1e-4) critical value.
double chi_square_ratio(const std::map<uint64_t, double> &dist, const std::vector<uint64_t> &words) {
    std::map<uint64_t, uint64_t> observed;
    for (uint64_t w : words) {
        observed[w]++;
    }
    const double shots = static_cast<double>(words.size());
    double stat = 0;
    double pooled_expected = 0;
    double pooled_observed = 0;
    int bins = 0;
    for (const auto &[w, p] : dist) {
        const double e = p * shots;
        const double o = observed.count(w) ? static_cast<double>(observed[w]) : 0.0;
        if (e < 5) {
            pooled_expected += e;
            pooled_observed += o;
            continue;
        }
        stat += (o - e) * (o - e) / e;
        bins++;
    }
    for (const auto &[w, k] : observed) {
        if (!dist.count(w)) {
            pooled_observed += static_cast<double>(k);
        }
    }
    if (pooled_expected >= 5) {
        stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
        bins++;
    } else if (pooled_observed > 20) {
        return 1e9;  // mass where the oracle has (almost) none
    }
    const double k = std::max(1, bins - 1);
    const double z = 3.72;
    const double crit = k * std::pow(1 - 2 / (9 * k) + z * std::sqrt(2 / (9 * k)), 3);
    return stat / crit;
}

TEST(GateMatrix, MatchesTextbook) {
    for (auto kind : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::Sdg, GateKind::T,
                      GateKind::Rx, GateKind::Ry, GateKind::Rz}) {
        for (double theta : {0.0, 0.3, -1.7, 4.0}) {
            const Gate g = Gate::one(kind, 0, theta);
            const Mat2 m = gate_matrix(g);
            const Matrix want = oracle::single_qubit(kind, g.angle);
            for (int i = 0; i < 4; i++) {
                EXPECT_NEAR(std::abs(m[i] - want.a[i]), 0.0, 1e-14) << gate_kind_name(kind) << " " << theta;
            }
        }
    }
}

TEST(SimulateExact, Examples) {
    auto bell = simulate_exact(ghz_circuit(2));
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(bell.amplitude(0) - r), 0, 1e-12);
    EXPECT_NEAR(std::abs(bell.amplitude(1)), 0, 1e-12);
    EXPECT_NEAR(std::abs(bell.amplitude(2)), 0, 1e-12);
    EXPECT_NEAR(std::abs(bell.amplitude(3) - r), 0, 1e-12);

    auto empty = simulate_exact(Circuit(3));
    EXPECT_EQ(empty.amplitude(0), Complex(1.0));
    for (uint64_t i = 1; i < 8; i++) {
        EXPECT_EQ(empty.amplitude(i), Complex(0.0));
    }

    auto qft = simulate_exact(qft_circuit(4));
    for (uint64_t i = 0; i < 16; i++) {
        EXPECT_NEAR(std::abs(qft.amplitude(i) - 0.25), 0, 1e-12);
    }
}

Circuit mixed_random(uint32_t n, uint32_t n_gates, uint64_t seed) {
    static constexpr GateKind kinds[] = {GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,
                                         GateKind::Sdg, GateKind::T, GateKind::Rx, GateKind::Ry, GateKind::Rz,
                                         GateKind::CP, GateKind::CX, GateKind::CZ, GateKind::SWAP};
    Rng rng(seed);
    Circuit c(n);
    for (uint32_t k = 0; k < n_gates; k++) {
        GateKind kind = kinds[rng.below(std::size(kinds))];
        double angle = rng.uniform() * 6.0 - 3.0;
        uint32_t a = static_cast<uint32_t>(rng.below(n));
        if (is_two_qubit(kind)) {
            uint32_t b = static_cast<uint32_t>(rng.below(n - 1));
            b += b >= a ? 1 : 0;
            c.append(Gate::two(kind, a, b, angle));
        } else {
            c.append(Gate::one(kind, a, angle));
        }
    }
    return c;
}

TEST(SimulateExact, MatchesDenseOracle) {
    for (uint64_t seed = 0; seed < 60; seed++) {
        const uint32_t n = 2 + seed % 5;
        // Long single-qubit runs exercise gate fusion.
        auto c = mixed_random(n, 40, seed);
        auto got = simulate_exact(c);
        auto want = oracle::state(c);
        for (size_t i = 0; i < want.size(); i++) {
            ASSERT_NEAR(std::abs(got.amplitude(i) - want[i]), 0, 1e-12) << "seed " << seed << " index " << i;
        }
    }
}

TEST(SimulateExact, RejectsMeasurement) {
    Circuit c(1);
    c.append(Gate::measure(0));
    try {
        simulate_exact(c);
        FAIL();
    } catch (const QcutError &e) {
        EXPECT_EQ(e.code(), ErrorCode::RequiresSampling);
    }
}

TEST(SimulateExact, NormPreserved) {
    for (uint32_t n = 2; n <= 16; n += 2) {
        for (const Circuit &c : {ghz_circuit(n), qft_circuit(n), random_circuit(n, n, 3), brickwork_circuit(n, 4, 3)}) {
            EXPECT_NEAR(simulate_exact(c).norm_squared(), 1.0, 1e-10);
        }
    }
}

Circuit measured(Circuit c) {
    for (uint32_t q = 0; q < c.num_qubits(); q++) {
        c.append(Gate::measure(q));
    }
    return c;
}

TEST(RunShots, Examples) {
    auto ghz = run_shots(measured(ghz_circuit(2)), NoiseProfile::noiseless(), 1000, 5);
    EXPECT_EQ(ghz.total_shots, 1000u);
    for (const auto &[bits, k] : ghz.counts) {
        EXPECT_TRUE(bits == "00" || bits == "11") << bits;
    }
    EXPECT_EQ(ghz.counts.size(), 2u);

    auto flipped = run_shots(measured(Circuit(2)), {0, 0, 1.0}, 100, 1);
    EXPECT_EQ(flipped.counts, (std::map<std::string, uint64_t>{{"11", 100}}));

    Circuit x(2);
    x.append(Gate::one(GateKind::X, 0));
    auto le = run_shots(measured(x), NoiseProfile::noiseless(), 50, 1);
    EXPECT_EQ(le.counts, (std::map<std::string, uint64_t>{{"01", 50}}));

    EXPECT_THROW(run_shots(measured(x), NoiseProfile::noiseless(), 0, 1), QcutError);
    EXPECT_THROW(run_shots(measured(x), {1.5, 0, 0}, 10, 1), QcutError);
}

TEST(RunShots, WarnsOnUnmeasuredQubit) {
    Circuit c(2);
    c.append(Gate::one(GateKind::X, 1));
    c.append(Gate::measure(0));
    auto counts = run_shots(c, NoiseProfile::noiseless(), 10, 1);
    ASSERT_EQ(counts.warnings.size(), 1u);
    EXPECT_NE(counts.warnings[0].find("qubit 1"), std::string::npos);
    EXPECT_EQ(counts.counts.at("00"), 10u);
}

TEST(RunShots, Deterministic) {
    auto c = measured(random_circuit(5, 5, 2));
    NoiseProfile noise{0.01, 0.05, 0.02};
    auto a = run_shots(c, noise, 3000, 77);
    auto b = run_shots(c, noise, 3000, 77);
    EXPECT_EQ(a.counts, b.counts);
    auto other = run_shots(c, noise, 3000, 78);
    EXPECT_NE(a.counts, other.counts);
}

TEST(RunShots, NoisyTrajectoriesMatchDensityMatrix) {
    // Terminal measurements only: the Pauli-frame grouped path.
    const NoiseProfile noise{0.05, 0.15, 0.03};
    for (uint64_t seed = 0; seed < 8; seed++) {
        auto c = measured(mixed_random(3 + seed % 2, 14, 100 + seed));
        auto dist = noisy_word_distribution(c, noise);
        auto words = sample_measurements(c, noise, 40000, seed);
        EXPECT_LT(chi_square_ratio(dist, words), 1.0) << "seed " << seed;
    }
}

TEST(RunShots, MidCircuitMeasurementsMatchDensityMatrix) {
    // Mid-circuit measure and prepare: the per-shot path.
    const NoiseProfile noise{0.04, 0.1, 0.05};
    for (uint64_t seed = 0; seed < 6; seed++) {
        Circuit c = mixed_random(3, 8, 200 + seed);
        c.append(Gate::measure(1));
        c.append(Gate::prepare(1, static_cast<PrepKind>(seed % 6)));
        c.append(mixed_random(3, 6, 300 + seed));
        c.append(Gate::measure(0));  // non-destructive: the qubit keeps evolving
        c.append(Gate::one(GateKind::H, 0));
        c = measured(c);
        auto dist = noisy_word_distribution(c, noise);
        auto words = sample_measurements(c, noise, 20000, seed);
        EXPECT_LT(chi_square_ratio(dist, words), 1.0) << "seed " << seed;
    }
}

TEST(RunShots, NoiselessCountsConverge) {
    auto base = random_circuit(4, 4, 11);
    const double ideal = ideal_expectation(simulate_exact(base), Observable::parse("0.5*ZZII + 0.5*IIIZ"));
    auto c = measured(base);
    int within = 0;
    for (uint64_t trial = 0; trial < 100; trial++) {
        auto counts = run_shots(c, NoiseProfile::noiseless(), 1000000, trial);
        double est = expectation_from_counts(counts, Observable::parse("0.5*ZZII + 0.5*IIIZ"));
        within += std::abs(est - ideal) <= 4.0 / std::sqrt(1e6) ? 1 : 0;
    }
    EXPECT_GE(within, 99);
}

TEST(RunShots, NoiseNeverImprovesGhzParity) {
    const uint32_t n = 4;
    auto c = measured(ghz_circuit(n));
    Observable parity({PauliString{std::string(n, 'Z'), 1.0}});
    double previous = 2.0;
    for (double p2 : {0.0, 0.02, 0.05, 0.1}) {
        double mean = 0;
        for (uint64_t seed = 0; seed < 20; seed++) {
            mean += std::abs(expectation_from_counts(run_shots(c, {0, p2, 0}, 2000, seed), parity)) / 20;
        }
        EXPECT_LE(mean, previous) << "p2=" << p2;
        previous = mean;
    }
    EXPECT_LT(previous, 0.9);
}

TEST(ExpectationFromCounts, Examples) {
    Counts balanced{{{"00", 500}, {"11", 500}}, 1000, {}};
    EXPECT_DOUBLE_EQ(expectation_from_counts(balanced, Observable::parse("ZI")), 0.0);
    Counts zeros{{{"00", 1000}}, 1000, {}};
    EXPECT_DOUBLE_EQ(expectation_from_counts(zeros, z_magnetization(2)), 1.0);
    Counts odd{{{"01", 250}, {"10", 750}}, 1000, {}};
    EXPECT_DOUBLE_EQ(expectation_from_counts(odd, Observable::parse("ZZ")), -1.0);
    // Little-endian: "01" means qubit 0 is 1.
    EXPECT_DOUBLE_EQ(expectation_from_counts(Counts{{{"01", 10}}, 10, {}}, Observable::parse("ZI")), -1.0);
    EXPECT_DOUBLE_EQ(expectation_from_counts(Counts{{{"01", 10}}, 10, {}}, Observable::parse("IZ")), 1.0);
}

TEST(ExpectationFromCounts, RejectsNonDiagonal) {
    Counts zeros{{{"00", 10}}, 10, {}};
    try {
        expectation_from_counts(zeros, Observable::parse("XZ"));
        FAIL();
    } catch (const QcutError &e) {
        EXPECT_EQ(e.code(), ErrorCode::BasisMismatch);
    }
}

TEST(EnumerateBranches, ProbabilitiesMatchOracle) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        Circuit c = mixed_random(3, 10, 400 + seed);
        c.append(Gate::measure(2));
        c.append(mixed_random(3, 5, 500 + seed));
        c.append(Gate::measure(0));
        auto branches = enumerate_branches(c);
        auto dist = noisy_word_distribution(c, NoiseProfile::noiseless());
        double total = 0;
        for (const auto &b : branches) {
            total += b.probability;
            EXPECT_NEAR(b.probability, dist[b.outcomes], 1e-12);
            EXPECT_NEAR(b.state.norm_squared(), 1.0, 1e-10);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

}  // namespace
}  // namespace qcut
