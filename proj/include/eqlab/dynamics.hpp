// dynamics.hpp — density operators, unitary time evolution under a level
// decomposition, the infinite-time dephased state, effective dimension, and
// purification of mixed states.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqlab/spectral.hpp"

namespace eqlab {

class DensityOperator {
public:
    // Validates hermiticity, positivity and unit trace (all to 1e-9).
    static DensityOperator from_matrix(const CMatrix& rho);
    // Validates unit norm (1e-9) and keeps the vector as a pure-state shortcut.
    static DensityOperator from_pure(const CVector& psi);
    // No validation; for operators that are valid by construction
    // (unitary images, projector sandwiches, normalized projectors).
    static DensityOperator unchecked(CMatrix rho, std::optional<CVector> pure = std::nullopt);

    const CMatrix& matrix() const { return rho_; }
    bool is_pure() const { return pure_.has_value(); }
    const CVector& pure_vector() const;
    int dim() const { return static_cast<int>(rho_.rows()); }
    double purity() const;  // tr(rho^2)

private:
    DensityOperator(CMatrix rho, std::optional<CVector> pure)
        : rho_(std::move(rho)), pure_(std::move(pure)) {}
    CMatrix rho_;
    std::optional<CVector> pure_;
};

// Finite-time stand-in for the infinite-time average: n_samples times drawn
// uniformly at random in [0, t_max], seeded.
struct TimeAverageConvention {
    double t_max = 0.0;  // hbar = 1, so times are inverse energy units
    int n_samples = 2000;
    std::uint64_t seed = 0;
};

// t_max = 1e3 / (smallest level gap); random sampling avoids aliasing against
// commensurate frequencies.
TimeAverageConvention default_convention(const Hamiltonian& H, std::uint64_t seed,
                                         int n_samples = 2000);

std::vector<double> sample_times(const TimeAverageConvention& conv);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;  // standard error of the mean
};

MonteCarloEstimate mean_and_std_error(const std::vector<double>& samples);

// U(t) = sum_n exp(-i E_n t) P_n.
CMatrix propagator(const Hamiltonian& H, double t);

// rho(t) = U rho0 U^dag; pure states evolve as vectors.
DensityOperator evolve(const Hamiltonian& H, const DensityOperator& rho0, double t);

// omega = sum_n P_n rho0 P_n, the infinite-time average of rho(t).
DensityOperator dephase(const Hamiltonian& H, const DensityOperator& rho0);

// d_eff = 1 / sum_n tr(P_n rho0)^2; always in [1, dim].
double effective_dimension(const Hamiltonian& H, const DensityOperator& rho0);

struct Purification {
    CVector state;   // unit vector on the doubled space, system index major
    int system_dim;  // ancilla has the same dimension
};

// state = sum_i sqrt(lambda_i) |v_i>|i>, eigenvalues sorted descending.
Purification purify(const DensityOperator& rho0);

// H -> H tensor I: same distinct energies, multiplicities inflated by dim,
// so the gap structure is unchanged.
Hamiltonian lift_hamiltonian(const Hamiltonian& H);

}  // namespace eqlab
