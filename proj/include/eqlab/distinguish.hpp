// distinguish.hpp — POVM measurement model, distinguishability of states
// under a measurement or a measurement set, trace distance, the optimal
// two-outcome (Helstrom) measurement, and the finite-measurement
// equilibration bound on average distinguishability.
#pragma once

#include <string>
#include <vector>

#include "eqlab/dynamics.hpp"

namespace eqlab {

struct PovmOutcome {
    std::string result;  // opaque label
    CMatrix op;          // Hermitian, positive semidefinite
};

struct POVM {
    std::string label;
    std::vector<PovmOutcome> outcomes;  // operators must sum to identity
    int dim() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes.front().op.rows()); }
};

struct MeasurementSet {
    std::vector<POVM> measurements;
    // N(M): total outcome count across all members.
    int total_outcomes() const;
};

struct PovmViolation {
    std::string what;
    double magnitude;
};

// Diagnostic: positivity and completeness defects with magnitudes; empty = ok.
std::vector<PovmViolation> validate_povm(const POVM& povm);

// D_M = 1/2 sum_r |tr(M_r rho1) - tr(M_r rho2)|. The optimal success
// probability of guessing between the two equiprobable states with this
// measurement is (1 + D_M)/2.
double d_povm(const POVM& povm, const DensityOperator& rho1, const DensityOperator& rho2);

// max over the set's members of d_povm.
double d_set(const MeasurementSet& set, const DensityOperator& rho1,
             const DensityOperator& rho2);

// 1/2 tr|rho1 - rho2|; the maximum of d_povm over all measurements.
double trace_distance(const DensityOperator& rho1, const DensityOperator& rho2);

// Two-outcome projective measurement onto the nonnegative and negative
// eigenspaces of rho1 - rho2; achieves the trace distance. Zero eigenvalues
// are assigned to the first outcome.
POVM helstrom_povm(const DensityOperator& rho1, const DensityOperator& rho2);

struct CorollaryReport {
    double bound_weighted = 0.0;  // sum_r Delta(M_r) / (4 sqrt(d_eff))
    double bound_count = 0.0;     // N(M) / (4 sqrt(d_eff))
    double empirical_avg = 0.0;   // sampled <d_set(S, rho(t), omega)>
    double std_error = 0.0;
    double d_eff = 0.0;
    bool bound_holds = false;     // empirical_avg <= bound_weighted + 3 std_error
};

CorollaryReport corollary_report(const MeasurementSet& set, const Hamiltonian& H,
                                 const DensityOperator& rho0,
                                 const TimeAverageConvention& conv);

}  // namespace eqlab
