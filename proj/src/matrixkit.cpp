#include "eqlab/matrixkit.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace eqlab {

bool is_finite(const CMatrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            if (!std::isfinite(M(i, j).real()) || !std::isfinite(M(i, j).imag()))
                return false;
    return true;
}

double max_abs(const CMatrix& M) {
    if (M.size() == 0) return 0.0;
    return M.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& M) {
    if (M.rows() != M.cols()) throw NonSquare("hermiticity_defect: matrix is not square");
    return max_abs(M - M.adjoint());
}

EigenSystem eig_hermitian(const CMatrix& M, double herm_tol) {
    if (M.rows() != M.cols()) throw NonSquare("eig_hermitian: matrix is not square");
    if (!is_finite(M)) throw Error("eig_hermitian: non-finite entries");
    double defect = hermiticity_defect(M);
    if (defect > herm_tol)
        throw NotHermitian("eig_hermitian: asymmetry " + std::to_string(defect) +
                           " exceeds tolerance " + std::to_string(herm_tol));
    CMatrix sym = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("eig_hermitian: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const CMatrix& A) {
    if (!is_finite(A)) throw Error("operator_norm: non-finite entries");
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(A);
    return svd.singularValues()(0);
}

CMatrix tensor(const CMatrix& A, const CMatrix& B) {
    CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

CMatrix partial_trace(const CMatrix& M, int dim_s, int dim_b, Keep keep) {
    if (dim_s < 1 || dim_b < 1)
        throw DimensionMismatch("partial_trace: factor dimensions must be positive");
    Eigen::Index d = static_cast<Eigen::Index>(dim_s) * dim_b;
    if (M.rows() != d || M.cols() != d)
        throw DimensionMismatch("partial_trace: matrix dimension " + std::to_string(M.rows()) +
                                " does not equal " + std::to_string(dim_s) + "*" +
                                std::to_string(dim_b));
    if (keep == Keep::subsystem) {
        CMatrix out = CMatrix::Zero(dim_s, dim_s);
        for (int s = 0; s < dim_s; ++s)
            for (int t = 0; t < dim_s; ++t)
                for (int b = 0; b < dim_b; ++b)
                    out(s, t) += M(s * dim_b + b, t * dim_b + b);
        return out;
    }
    CMatrix out = CMatrix::Zero(dim_b, dim_b);
    for (int b = 0; b < dim_b; ++b)
        for (int c = 0; c < dim_b; ++c)
            for (int s = 0; s < dim_s; ++s)
                out(b, c) += M(s * dim_b + b, s * dim_b + c);
    return out;
}

double trace_norm(const CMatrix& M, double herm_tol) {
    return eig_hermitian(M, herm_tol).eigenvalues.cwiseAbs().sum();
}

}  // namespace eqlab
