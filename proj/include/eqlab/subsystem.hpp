// subsystem.hpp — bipartite splits, the clock-and-shift orthonormal operator
// basis of the subsystem, and the equilibration bound on the time-averaged
// trace distance between the reduced state and its equilibrium value.
#pragma once

#include <vector>

#include "eqlab/distinguish.hpp"
#include "eqlab/dynamics.hpp"

namespace eqlab {

// The subsystem is always the leading tensor factor (major index).
struct BipartiteSplit {
    int d_s = 2;
    int d_b = 1;
};

// d_s^2 operators F_{d_s k0 + k1} = (1/sqrt(d_s)) sum_l w^(l k0) |(l+k1) mod d_s><l|
// with w = exp(2 pi i / d_s), over the computational basis. Orthonormal under
// tr(F_l^dag F_k) = delta_kl; sqrt(d_s) F_k is unitary.
struct SchwingerBasis {
    int d_s = 0;
    std::vector<CMatrix> ops;
};

SchwingerBasis schwinger_basis(int d_s);

// Coefficients lambda_k = tr(F_k^dag M); sum_k lambda_k F_k reconstructs M.
std::vector<Complex> expand_in_basis(const CMatrix& M, const SchwingerBasis& basis);

// (1/2) sqrt(d_s^2 / d_eff); requires the gap check to pass.
double subsystem_bound(const Hamiltonian& H, const DensityOperator& rho0,
                       const BipartiteSplit& split);

// Monte-Carlo mean of trace_distance(rho_S(t), omega_S); deterministic under
// conv.seed. Valid for any Hamiltonian (the bound only applies to gap-valid ones).
MonteCarloEstimate avg_subsystem_distance(const Hamiltonian& H, const DensityOperator& rho0,
                                          const BipartiteSplit& split,
                                          const TimeAverageConvention& conv);

}  // namespace eqlab
