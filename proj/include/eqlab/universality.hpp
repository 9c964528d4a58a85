// universality.hpp — partitions of the Hilbert space into Hamiltonian-
// compatible subspaces whose states all effectively equilibrate to the same
// maximally mixed state on the subspace, plus the epsilon-augmented
// distinguishability bound for states initialized inside one subspace.
#pragma once

#include <string>
#include <vector>

#include "eqlab/distinguish.hpp"

namespace eqlab {

struct SubspacePartition {
    std::vector<CMatrix> projectors;  // Hermitian idempotent, mutually orthogonal, sum to I
    std::vector<std::string> labels;  // same length as projectors
    int size() const { return static_cast<int>(projectors.size()); }
};

struct PartitionViolation {
    std::string what;
    double magnitude;
};

// Diagnostic: projector algebra, completeness, and commutation with H.
std::vector<PartitionViolation> validate_partition(const Hamiltonian& H,
                                                   const SubspacePartition& partition);

// Bands between consecutive interior edges (open-ended below the first and
// above the last). Each projector sums the level projectors with energy in
// its band; empty bands are dropped. Throws EdgeOnLevel when a level energy
// coincides with an edge within the clustering tolerance.
SubspacePartition microcanonical_partition(const Hamiltonian& H,
                                           const std::vector<double>& band_edges);

// Omega_k = Pi_k / tr(Pi_k).
DensityOperator equilibrium_state(const SubspacePartition& partition, int k);

// epsilon = max over pairs from the supplied basis of d_set on the pair of
// eigenstate projectors. Each basis vector must lie in the subspace (support
// tolerance 1e-9) and occupy a single energy level.
double eigenstate_epsilon(const MeasurementSet& set, const Hamiltonian& H,
                          const CMatrix& projector, const std::vector<CVector>& basis);

struct UniversalityReport {
    double epsilon = 0.0;
    double bound = 0.0;         // N(M) / (4 sqrt(d_eff)) + epsilon
    double empirical_avg = 0.0; // sampled <d_set(S, rho(t), Omega_k)>
    double std_error = 0.0;
    double d_eff = 0.0;
    DensityOperator omega_k = DensityOperator::unchecked(CMatrix::Identity(1, 1));
    bool bound_holds = false;
};

// epsilon is evaluated over a simultaneous eigenbasis of (H, omega) spanning
// the subspace — the pairs the bound's derivation actually consumes — rather
// than over every normalized eigenstate of a degenerate level.
UniversalityReport universality_report(const MeasurementSet& set, const Hamiltonian& H,
                                       const DensityOperator& rho0,
                                       const SubspacePartition& partition, int k,
                                       const TimeAverageConvention& conv);

}  // namespace eqlab
