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

#include <bit>
#include <cmath>

#include "oracle.h"
#include "qcut/circuit.h"
#include "qcut/error.h"
#include "qcut/observable.h"
#include "qcut/rng.h"
#include "qcut/simulator.h"

namespace qcut {
namespace {

TEST(Observables, ZMagnetization) {
    EXPECT_EQ(z_magnetization(2), Observable({{"ZI", 0.5}, {"IZ", 0.5}}));
    EXPECT_EQ(z_magnetization(2).str(), "0.5*ZI + 0.5*IZ");
    EXPECT_EQ(z_magnetization(1), Observable({{"Z", 1.0}}));
    EXPECT_NEAR(ideal_expectation(simulate_exact(ghz_circuit(4)), z_magnetization(4)), 0.0, 1e-12);
    EXPECT_THROW(z_magnetization(0), QcutError);
}

TEST(Observables, GhzStabilizers) {
    auto s3 = ghz_stabilizers(3);
    ASSERT_EQ(s3.size(), 3u);
    EXPECT_EQ(s3[0], Observable({{"XXX", 1.0}}));
    EXPECT_EQ(s3[1], Observable({{"ZZI", 1.0}}));
    EXPECT_EQ(s3[2], Observable({{"IZZ", 1.0}}));
    for (uint32_t n = 2; n <= 8; n++) {
        auto set = ghz_stabilizers(n);
        EXPECT_EQ(set.size(), n);
        auto psi = oracle::state(ghz_circuit(n));
        for (const auto &o : set) {
            ASSERT_EQ(o.terms().size(), 1u);
            EXPECT_NEAR(oracle::expectation(psi, o.terms()[0].paulis), 1.0, 1e-12);
        }
    }
}

TEST(Observables, IdealExpectationExamples) {
    EXPECT_NEAR(ideal_expectation(simulate_exact(ghz_circuit(3)), Observable::parse("XXX")), 1.0, 1e-12);
    EXPECT_NEAR(ideal_expectation(StateVector(3), z_magnetization(3)), 1.0, 1e-12);
    EXPECT_NEAR(ideal_expectation(simulate_exact(qft_circuit(5)), z_magnetization(5)), 0.0, 1e-10);
    try {
        ideal_expectation(StateVector(3), z_magnetization(2));
        FAIL();
    } catch (const QcutError &e) {
        EXPECT_EQ(e.code(), ErrorCode::Dimension);
    }
}

std::string random_pauli(Rng &rng, uint32_t n) {
    std::string s;
    for (uint32_t q = 0; q < n; q++) {
        s += "IXYZ"[rng.below(4)];
    }
    return s;
}

TEST(Observables, MatchesDenseOracle) {
    Rng rng(4);
    for (uint64_t seed = 0; seed < 40; seed++) {
        const uint32_t n = 2 + seed % 4;
        auto c = random_circuit(n, 5, seed);
        auto psi = oracle::state(c);
        auto state = simulate_exact(c);
        for (int k = 0; k < 10; k++) {
            auto p = random_pauli(rng, n);
            EXPECT_NEAR(pauli_expectation(state, p).real(), oracle::expectation(psi, p), 1e-12) << p;
            EXPECT_NEAR(pauli_expectation(state, p).imag(), 0.0, 1e-12);
        }
    }
}

TEST(Observables, LinearAndBounded) {
    Rng rng(9);
    for (uint64_t seed = 0; seed < 30; seed++) {
        const uint32_t n = 3;
        auto state = simulate_exact(random_circuit(n, 4, seed));
        std::vector<PauliString> terms;
        double expected = 0;
        double norm = 0;
        for (int k = 0; k < 4; k++) {
            PauliString t{random_pauli(rng, n), rng.uniform() * 4 - 2};
            expected += t.coefficient * ideal_expectation(state, Observable({{t.paulis, 1.0}}));
            norm += std::abs(t.coefficient);
            terms.push_back(t);
        }
        Observable sum(terms);
        const double value = ideal_expectation(state, sum);
        EXPECT_NEAR(value, expected, 1e-12);
        EXPECT_LE(std::abs(value), norm + 1e-12);
        EXPECT_NEAR(sum.coefficient_norm(), norm, 1e-12);
    }
}

TEST(Observables, MagnetizationOnBasisStates) {
    for (uint32_t n = 1; n <= 6; n++) {
        for (uint64_t b = 0; b < (uint64_t{1} << n); b++) {
            Circuit c(n);
            for (uint32_t q = 0; q < n; q++) {
                if ((b >> q) & 1) {
                    c.append(Gate::one(GateKind::X, q));
                }
            }
            const double want = (static_cast<double>(n) - 2.0 * std::popcount(b)) / n;
            EXPECT_NEAR(ideal_expectation(simulate_exact(c), z_magnetization(n)), want, 1e-12);
        }
    }
}

TEST(Observables, AnalyticValuesAcrossWidths) {
    for (uint32_t n = 2; n <= 16; n++) {
        auto ghz = simulate_exact(ghz_circuit(n));
        EXPECT_NEAR(ideal_expectation(ghz, z_magnetization(n)), 0.0, 1e-10);
        for (const auto &o : ghz_stabilizers(n)) {
            EXPECT_NEAR(ideal_expectation(ghz, o), 1.0, 1e-10) << o.str();
        }
        auto qft = simulate_exact(qft_circuit(n));
        for (uint32_t q = 0; q < n; q++) {
            std::string z(n, 'I');
            z[q] = 'Z';
            EXPECT_NEAR(pauli_expectation(qft, z).real(), 0.0, 1e-10);
        }
    }
}

TEST(Observables, ParseAndPrint) {
    auto o = Observable::parse("0.25*XYZ + -1.5*IIZ + ZZZ", "mine");
    ASSERT_EQ(o.terms().size(), 3u);
    EXPECT_EQ(o.terms()[0], (PauliString{"XYZ", 0.25}));
    EXPECT_EQ(o.terms()[1], (PauliString{"IIZ", -1.5}));
    EXPECT_EQ(o.terms()[2], (PauliString{"ZZZ", 1.0}));
    EXPECT_EQ(o.name(), "mine");
    EXPECT_EQ(Observable::parse(o.str()), o);
    EXPECT_THROW(Observable::parse("XA"), QcutError);
    EXPECT_THROW(Observable::parse("XX + Z"), QcutError);
    EXPECT_THROW(Observable::parse("abc*XX"), QcutError);
    EXPECT_THROW(Observable({}), QcutError);
}

TEST(Observables, PauliHelpers) {
    EXPECT_TRUE((PauliString{"IZZ", 1}).is_diagonal());
    EXPECT_FALSE((PauliString{"IXZ", 1}).is_diagonal());
    EXPECT_EQ((PauliString{"XYIZ", 1}).z_mapped(), "ZZIZ");
}

TEST(MeasurementRotation, Fragments) {
    auto xi = measurement_rotation({"XI", 1});
    ASSERT_EQ(xi.size(), 1u);
    EXPECT_EQ(xi[0], Gate::one(GateKind::H, 0));
    EXPECT_EQ(measurement_rotation({"ZZ", 1}).size(), 0u);
    auto iy = measurement_rotation({"IY", 1});
    ASSERT_EQ(iy.size(), 2u);
    EXPECT_EQ(iy[0], Gate::one(GateKind::Sdg, 1));
    EXPECT_EQ(iy[1], Gate::one(GateKind::H, 1));
}

TEST(MeasurementRotation, RotatedExactValueMatches) {
    // After rotation the Z-mapped string has the original expectation.
    Rng rng(21);
    for (uint64_t seed = 0; seed < 50; seed++) {
        auto c = random_circuit(4, 4, seed);
        auto p = random_pauli(rng, 4);
        Circuit rotated = c;
        rotated.append(measurement_rotation({p, 1}));
        EXPECT_NEAR(oracle::expectation(oracle::state(rotated), PauliString{p, 1}.z_mapped()),
                    oracle::expectation(oracle::state(c), p), 1e-12)
            << p;
    }
}

TEST(MeasurementRotation, RotatedCountsConverge) {
    Rng rng(33);
    for (uint64_t trial = 0; trial < 100; trial++) {
        auto c = random_circuit(3, 4, 1000 + trial);
        PauliString term{random_pauli(rng, 3), 1.0};
        const double ideal = ideal_expectation(simulate_exact(c), Observable({term}));
        Circuit rotated = c;
        rotated.append(measurement_rotation(term));
        for (uint32_t q = 0; q < 3; q++) {
            rotated.append(Gate::measure(q));
        }
        auto counts = run_shots(rotated, NoiseProfile::noiseless(), 1000000, trial);
        const double est = expectation_from_counts(counts, Observable({{term.z_mapped(), 1.0}}));
        EXPECT_NEAR(est, ideal, 0.01) << term.paulis;
    }
}

}  // namespace
}  // namespace qcut
