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

// Brute-force reference implementations for tests. Everything here is built
// from textbook matrices with dense linear algebra and shares no code with the
// library's kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qcut/circuit.h"

namespace qcut::oracle {

using C = std::complex<double>;

/// Dense square matrix, row-major.
struct Matrix {
    size_t dim = 0;
    std::vector<C> a;

    explicit Matrix(size_t d = 0) : dim(d), a(d * d, C{}) {
    }
    static Matrix identity(size_t d) {
        Matrix m(d);
        for (size_t i = 0; i < d; i++) {
            m(i, i) = 1.0;
        }
        return m;
    }
    C &operator()(size_t r, size_t c) {
        return a[r * dim + c];
    }
    C operator()(size_t r, size_t c) const {
        return a[r * dim + c];
    }
};

inline Matrix operator*(const Matrix &x, const Matrix &y) {
    Matrix out(x.dim);
    for (size_t i = 0; i < x.dim; i++) {
        for (size_t k = 0; k < x.dim; k++) {
            const C v = x(i, k);
            if (v == C{}) {
                continue;
            }
            for (size_t j = 0; j < x.dim; j++) {
                out(i, j) += v * y(k, j);
            }
        }
    }
    return out;
}

inline Matrix operator+(const Matrix &x, const Matrix &y) {
    Matrix out(x.dim);
    for (size_t i = 0; i < x.a.size(); i++) {
        out.a[i] = x.a[i] + y.a[i];
    }
    return out;
}

inline Matrix scale(const Matrix &x, C s) {
    Matrix out = x;
    for (auto &v : out.a) {
        v *= s;
    }
    return out;
}

inline Matrix dagger(const Matrix &x) {
    Matrix out(x.dim);
    for (size_t i = 0; i < x.dim; i++) {
        for (size_t j = 0; j < x.dim; j++) {
            out(i, j) = std::conj(x(j, i));
        }
    }
    return out;
}

/// Kronecker product; `hi` acts on the more significant index bits.
inline Matrix kron(const Matrix &hi, const Matrix &lo) {
    Matrix out(hi.dim * lo.dim);
    for (size_t a = 0; a < hi.dim; a++) {
        for (size_t b = 0; b < hi.dim; b++) {
            for (size_t c = 0; c < lo.dim; c++) {
                for (size_t d = 0; d < lo.dim; d++) {
                    out(a * lo.dim + c, b * lo.dim + d) = hi(a, b) * lo(c, d);
                }
            }
        }
    }
    return out;
}

inline Matrix mat2(C a, C b, C c, C d) {
    Matrix m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

/// Textbook single-qubit matrices.
inline Matrix single_qubit(GateKind kind, double theta) {
    const C i{0.0, 1.0};
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::H:
            return mat2(r, r, r, -r);
        case GateKind::X:
            return mat2(0, 1, 1, 0);
        case GateKind::Y:
            return mat2(0, -i, i, 0);
        case GateKind::Z:
            return mat2(1, 0, 0, -1);
        case GateKind::S:
            return mat2(1, 0, 0, i);
        case GateKind::Sdg:
            return mat2(1, 0, 0, -i);
        case GateKind::T:
            return mat2(1, 0, 0, std::exp(i * (std::numbers::pi / 4)));
        case GateKind::Rx:
            return mat2(std::cos(theta / 2), -i * std::sin(theta / 2), -i * std::sin(theta / 2), std::cos(theta / 2));
        case GateKind::Ry:
            return mat2(std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2));
        case GateKind::Rz:
            return mat2(std::exp(-i * (theta / 2)), 0, 0, std::exp(i * (theta / 2)));
        default:
            return Matrix::identity(2);
    }
}

/// Full 2^n matrix of a single-qubit operator on qubit q (qubit q = index bit q).
inline Matrix embed1(const Matrix &m, uint32_t q, uint32_t n) {
    Matrix out = Matrix::identity(1);
    for (uint32_t k = n; k-- > 0;) {
        out = kron(out, k == q ? m : Matrix::identity(2));
    }
    return out;
}

/// Full 2^n matrix of a unitary gate, built by its action on basis states.
inline Matrix gate_unitary(const Gate &g, uint32_t n) {
    if (g.arity() == 1) {
        return embed1(single_qubit(g.kind, g.angle), g.q0(), n);
    }
    const size_t dim = size_t{1} << n;
    Matrix m(dim);
    const uint32_t a = g.q0();
    const uint32_t b = g.q1();
    for (size_t col = 0; col < dim; col++) {
        const bool ba = (col >> a) & 1;
        const bool bb = (col >> b) & 1;
        size_t row = col;
        C amp = 1.0;
        switch (g.kind) {
            case GateKind::CX:
                if (ba) {
                    row ^= size_t{1} << b;
                }
                break;
            case GateKind::CZ:
                if (ba && bb) {
                    amp = -1.0;
                }
                break;
            case GateKind::CP:
                if (ba && bb) {
                    amp = std::polar(1.0, g.angle);
                }
                break;
            case GateKind::SWAP:
                if (ba != bb) {
                    row ^= (size_t{1} << a) | (size_t{1} << b);
                }
                break;
            default:
                break;
        }
        m(row, col) = amp;
    }
    return m;
}

inline std::vector<C> mat_vec(const Matrix &m, const std::vector<C> &v) {
    std::vector<C> out(v.size());
    for (size_t i = 0; i < m.dim; i++) {
        C acc = 0;
        for (size_t j = 0; j < m.dim; j++) {
            acc += m(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

/// Final state of a unitary circuit by dense matrix-vector products.
inline std::vector<C> state(const Circuit &c) {
    std::vector<C> v(size_t{1} << c.num_qubits(), C{});
    v[0] = 1.0;
    for (const auto &g : c.gates()) {
        v = mat_vec(gate_unitary(g, c.num_qubits()), v);
    }
    return v;
}

/// Full matrix of a Pauli string (character q acts on qubit q).
inline Matrix pauli_matrix(const std::string &paulis) {
    Matrix out = Matrix::identity(1);
    for (size_t k = paulis.size(); k-- > 0;) {
        GateKind kind = paulis[k] == 'X' ? GateKind::X : paulis[k] == 'Y' ? GateKind::Y : paulis[k] == 'Z' ? GateKind::Z
                                                                                                           : GateKind::H;
        out = kron(out, paulis[k] == 'I' ? Matrix::identity(2) : single_qubit(kind, 0));
    }
    return out;
}

inline double expectation(const std::vector<C> &psi, const std::string &paulis) {
    auto phi = mat_vec(pauli_matrix(paulis), psi);
    C acc = 0;
    for (size_t i = 0; i < psi.size(); i++) {
        acc += std::conj(psi[i]) * phi[i];
    }
    return acc.real();
}

/// Density matrix evolution with signed mid-circuit measurements and resets.
struct Density {
    uint32_t n;
    Matrix rho;

    void unitary(const Matrix &u) {
        rho = u * rho * dagger(u);
    }
    /// rho -> sum_m (-1)^m P_m rho P_m on qubit q.
    void signed_measure(uint32_t q) {
        Matrix p0 = embed1(mat2(1, 0, 0, 0), q, n);
        Matrix p1 = embed1(mat2(0, 0, 0, 1), q, n);
        rho = p0 * rho * p0 + scale(p1 * rho * p1, -1.0);
    }
    /// Trace out qubit q and replace it by |0><0|.
    void reset(uint32_t q) {
        Matrix p0 = embed1(mat2(1, 0, 0, 0), q, n);
        Matrix lower = embed1(mat2(0, 1, 0, 0), q, n);  // |0><1|
        rho = p0 * rho * p0 + lower * rho * dagger(lower);
    }
    void gate(const Gate &g) {
        if (g.kind == GateKind::MeasureZ) {
            signed_measure(g.q0());
        } else if (g.kind == GateKind::PrepState) {
            reset(g.q0());
            const uint32_t q = g.q0();
            auto u = [&](GateKind k) { unitary(embed1(single_qubit(k, 0), q, n)); };
            switch (g.prep) {
                case PrepKind::Zero:
                    break;
                case PrepKind::One:
                    u(GateKind::X);
                    break;
                case PrepKind::Plus:
                    u(GateKind::H);
                    break;
                case PrepKind::Minus:
                    u(GateKind::X);
                    u(GateKind::H);
                    break;
                case PrepKind::PlusI:
                    u(GateKind::H);
                    u(GateKind::S);
                    break;
                case PrepKind::MinusI:
                    u(GateKind::X);
                    u(GateKind::H);
                    u(GateKind::S);
                    break;
            }
        } else {
            unitary(gate_unitary(g, n));
        }
    }
};

/// Superoperator (column-stacked vec) of a map given as a function on
/// density matrices over n qubits.
template <typename F>
Matrix superoperator(uint32_t n, F channel) {
    const size_t d = size_t{1} << n;
    Matrix s(d * d);
    for (size_t k = 0; k < d; k++) {
        for (size_t l = 0; l < d; l++) {
            Density rho{n, Matrix(d)};
            rho.rho(k, l) = 1.0;
            channel(rho);
            for (size_t i = 0; i < d; i++) {
                for (size_t j = 0; j < d; j++) {
                    s(j * d + i, l * d + k) = rho.rho(i, j);
                }
            }
        }
    }
    return s;
}

inline double max_abs_diff(const Matrix &x, const Matrix &y) {
    double m = 0;
    for (size_t i = 0; i < x.a.size(); i++) {
        m = std::max(m, std::abs(x.a[i] - y.a[i]));
    }
    return m;
}

}  // namespace qcut::oracle
