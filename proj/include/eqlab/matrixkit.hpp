// matrixkit.hpp — dense complex linear algebra shared by every eqlab module:
// Hermitian eigendecomposition, operator and trace norms, Kronecker products
// and partial traces.
//
// Index convention for composite spaces: the subsystem S is always the major
// (slow) index, i.e. a composite basis vector is |s>|b> -> index s*d_B + b.
// tensor() and partial_trace() both follow this convention.
#pragma once

#include <Eigen/Dense>

#include <complex>

#include "eqlab/errors.hpp"

namespace eqlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Absolute tolerance on the max-entry asymmetry |M - M^dag|_max.
inline constexpr double hermitian_tol = 1e-10;

bool is_finite(const CMatrix& M);
double max_abs(const CMatrix& M);             // max_ij |M_ij|
double hermiticity_defect(const CMatrix& M);  // |M - M^dag|_max

struct EigenSystem {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // orthonormal columns, matching order
};

// Hermitian eigendecomposition. The input is symmetrised as (M + M^dag)/2
// before solving, after the asymmetry check against herm_tol.
EigenSystem eig_hermitian(const CMatrix& M, double herm_tol = hermitian_tol);

// Largest singular value.
double operator_norm(const CMatrix& A);

// Kronecker product; A's entry (i,j) scales the full B block at (i*rB, j*cB).
CMatrix tensor(const CMatrix& A, const CMatrix& B);

enum class Keep { subsystem, bath };

// Partial trace of a (dim_s*dim_b)-dimensional operator over the factor not kept.
CMatrix partial_trace(const CMatrix& M, int dim_s, int dim_b, Keep keep);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const CMatrix& M, double herm_tol = hermitian_tol);

}  // namespace eqlab
