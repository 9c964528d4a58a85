#include "eqlab/equilibration.hpp"

#include <cmath>
#include <functional>

namespace eqlab {

namespace {

Complex trace_product(const CMatrix& A, const CMatrix& rho) {
    // tr(A rho) without forming the product
    return A.cwiseProduct(rho.transpose()).sum();
}

double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// min over complex c of |A - cI|, for non-Hermitian A.
double minimized_shifted_norm(const CMatrix& A) {
    const int d = static_cast<int>(A.rows());
    CMatrix eye = CMatrix::Identity(d, d);
    // |B| = sqrt(lambda_max(B^dag B)); much cheaper than a full SVD per probe
    Eigen::SelfAdjointEigenSolver<CMatrix> solver;
    auto f = [&](Complex c) {
        CMatrix B = A - c * eye;
        solver.compute(B.adjoint() * B, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(solver.eigenvalues()(d - 1), 0.0));
    };

    Complex c = A.trace() / static_cast<double>(d);
    double best = f(c);
    if (double at_zero = operator_norm(A); at_zero < best) {
        c = Complex(0.0, 0.0);
        best = at_zero;
    }

    const double norm_a = operator_norm(A);
    double radius = 2.0 * norm_a + 1.0;
    const double step_tol = 1e-9;
    for (int pass = 0; pass < 60; ++pass) {
        Complex prev = c;
        double re = golden_section([&](double x) { return f({x, c.imag()}); },
                                   c.real() - radius, c.real() + radius, step_tol);
        c = {re, c.imag()};
        double im = golden_section([&](double y) { return f({c.real(), y}); },
                                   c.imag() - radius, c.imag() + radius, step_tol);
        c = {c.real(), im};
        double moved = std::abs(c - prev);
        radius = std::max(8.0 * moved, 64.0 * step_tol);
        if (moved < 1e-8 && pass >= 2) break;
    }
    // Compass polish against stalls at nonsmooth points of the max singular value.
    double value = f(c);
    double h = 1e-2 * (norm_a + 1.0);
    while (h > 1e-9) {
        bool improved = false;
        for (Complex dir : {Complex(h, 0), Complex(-h, 0), Complex(0, h), Complex(0, -h)}) {
            double trial = f(c + dir);
            if (trial < value) {
                value = trial;
                c += dir;
                improved = true;
            }
        }
        if (!improved) h *= 0.5;
    }
    return std::min(value, best);
}

// sigma^2 in the adapted basis of a pure state:
// sum_{n != m} |c_n|^2 |c_m|^2 |<m|A|n>|^2.
double sigma_sq_pure(const Hamiltonian& H, const CVector& psi, const CMatrix& A) {
    AdaptedBasis basis = adapted_eigenbasis(H, psi);
    const int K = static_cast<int>(basis.size());
    CMatrix B(H.dim(), K);
    RVector w(K);
    for (int i = 0; i < K; ++i) {
        B.col(i) = basis[static_cast<std::size_t>(i)].vec;
        w(i) = std::norm(basis[static_cast<std::size_t>(i)].amplitude);
    }
    CMatrix T = B.adjoint() * A * B;
    double sum = 0.0;
    for (int m = 0; m < K; ++m)
        for (int n = 0; n < K; ++n)
            if (n != m) sum += w(n) * w(m) * std::norm(T(m, n));
    return std::max(sum, 0.0);
}

}  // namespace

double delta(const CMatrix& A) {
    if (A.rows() != A.cols()) throw NonSquare("delta: matrix is not square");
    if (!is_finite(A)) throw Error("delta: non-finite entries");
    if (A.rows() == 0) return 0.0;
    if (hermiticity_defect(A) <= hermitian_tol) {
        EigenSystem es = eig_hermitian(A);
        return es.eigenvalues(A.rows() - 1) - es.eigenvalues(0);
    }
    return 2.0 * minimized_shifted_norm(A);
}

double sigma_sq_exact(const Hamiltonian& H, const DensityOperator& rho0, const CMatrix& A) {
    if (rho0.dim() != H.dim() || A.rows() != H.dim() || A.cols() != H.dim())
        throw DimensionMismatch("sigma_sq_exact: dimension mismatch");
    require_nondegenerate_gaps(H);
    if (rho0.is_pure()) return sigma_sq_pure(H, rho0.pure_vector(), A);
    Purification pur = purify(rho0);
    Hamiltonian lifted = lift_hamiltonian(H);
    CMatrix lifted_a = tensor(A, CMatrix::Identity(H.dim(), H.dim()));
    return sigma_sq_pure(lifted, pur.state, lifted_a);
}

MonteCarloEstimate sigma_sq_sampled(const Hamiltonian& H, const DensityOperator& rho0,
                                    const CMatrix& A, const TimeAverageConvention& conv) {
    if (rho0.dim() != H.dim() || A.rows() != H.dim() || A.cols() != H.dim())
        throw DimensionMismatch("sigma_sq_sampled: dimension mismatch");
    Complex equilibrium = trace_product(A, dephase(H, rho0).matrix());
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(conv.n_samples));
    for (double t : sample_times(conv)) {
        DensityOperator rho_t = evolve(H, rho0, t);
        double dev = std::abs(trace_product(A, rho_t.matrix()) - equilibrium);
        // deviations below 1e-15 are rounding noise, not signal
        samples.push_back(dev < 1e-15 ? 0.0 : dev * dev);
    }
    return mean_and_std_error(samples);
}

Theorem1Report theorem1_report(const Hamiltonian& H, const DensityOperator& rho0,
                               const CMatrix& A) {
    require_nondegenerate_gaps(H);
    Theorem1Report r;
    r.sigma_sq = sigma_sq_exact(H, rho0, A);
    r.d_eff = effective_dimension(H, rho0);
    r.delta_a = delta(A);
    r.operator_norm_a = operator_norm(A);
    r.purity_omega = dephase(H, rho0).purity();
    r.bound_delta = r.delta_a * r.delta_a / (4.0 * r.d_eff);
    r.bound_norm = r.operator_norm_a * r.operator_norm_a / r.d_eff;
    r.reimann_purity_bound = r.delta_a * r.delta_a * r.purity_omega;
    r.tight = std::abs(r.sigma_sq - r.bound_delta) <= 1e-9;
    r.exceeds_purity_bound = r.sigma_sq > r.reimann_purity_bound;
    return r;
}

}  // namespace eqlab
