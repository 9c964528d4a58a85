// helpers.hpp — shared generators and comparators for the test suites.
#pragma once

#include "eqlab/dynamics.hpp"
#include "eqlab/rng.hpp"

namespace testkit {

using eqlab::CMatrix;
using eqlab::Complex;
using eqlab::CVector;
using eqlab::Rng;

inline CMatrix random_complex(int rows, int cols, Rng& rng) {
    CMatrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) M(i, j) = rng.complex_gaussian();
    return M;
}

inline CMatrix random_hermitian(int d, Rng& rng) {
    CMatrix G = random_complex(d, d, rng);
    return 0.5 * (G + G.adjoint());
}

// Hilbert-Schmidt style random density matrix (full rank).
inline CMatrix random_density(int d, Rng& rng) {
    CMatrix W = random_complex(d, d, rng);
    CMatrix rho = W * W.adjoint();
    return rho / rho.trace().real();
}

inline CVector random_unit(int d, Rng& rng) {
    CVector v(d);
    for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
    return v / v.norm();
}

inline double max_abs_diff(const CMatrix& A, const CMatrix& B) {
    return (A - B).cwiseAbs().maxCoeff();
}

inline CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace testkit
