// equilibration.hpp — fluctuation variance of observable expectation values
// around equilibrium: the closed-form sigma^2, its Monte-Carlo estimator, the
// seminorm Delta(A), and the bound report comparing sigma^2 against
// Delta(A)^2/(4 d_eff), |A|^2/d_eff and the purity-based bound
// Delta(A)^2 tr(omega^2).
#pragma once

#include "eqlab/dynamics.hpp"

namespace eqlab {

// Delta(A) = 2 min_c |A - cI| over complex c. Equals the eigenvalue range for
// Hermitian A; otherwise minimized by coordinate-wise golden-section descent
// (the target is convex in (Re c, Im c)) from c0 = tr(A)/d.
double delta(const CMatrix& A);

// Closed form of the time-averaged |tr(A rho(t)) - tr(A omega)|^2: the
// adapted-basis double sum for pure states, evaluated after purification for
// mixed states. Refuses Hamiltonians with degenerate energy gaps, where the
// closed form does not hold.
double sigma_sq_exact(const Hamiltonian& H, const DensityOperator& rho0, const CMatrix& A);

// Direct Monte-Carlo estimate of the same quantity; deterministic under
// conv.seed. Valid for any Hamiltonian.
MonteCarloEstimate sigma_sq_sampled(const Hamiltonian& H, const DensityOperator& rho0,
                                    const CMatrix& A, const TimeAverageConvention& conv);

struct Theorem1Report {
    double sigma_sq = 0.0;
    double bound_delta = 0.0;           // Delta(A)^2 / (4 d_eff)
    double bound_norm = 0.0;            // |A|^2 / d_eff
    double reimann_purity_bound = 0.0;  // Delta(A)^2 * tr(omega^2)
    double d_eff = 0.0;
    double delta_a = 0.0;
    double operator_norm_a = 0.0;
    double purity_omega = 0.0;
    bool tight = false;                 // sigma_sq within 1e-9 of bound_delta
    bool exceeds_purity_bound = false;  // sigma_sq > reimann_purity_bound
};

Theorem1Report theorem1_report(const Hamiltonian& H, const DensityOperator& rho0,
                               const CMatrix& A);

}  // namespace eqlab
