#include "eqlab/distinguish.hpp"

#include <cmath>

#include "eqlab/equilibration.hpp"

namespace eqlab {

namespace {

// Outcome probability, clamped so that -0 noise cannot enter |.| sums.
double outcome_probability(const CMatrix& op, const CMatrix& rho) {
    double p = op.cwiseProduct(rho.transpose()).sum().real();
    return (std::abs(p) < 1e-15) ? 0.0 : p;
}

}  // namespace

int MeasurementSet::total_outcomes() const {
    int n = 0;
    for (const auto& m : measurements) n += static_cast<int>(m.outcomes.size());
    return n;
}

std::vector<PovmViolation> validate_povm(const POVM& povm) {
    std::vector<PovmViolation> violations;
    if (povm.outcomes.empty()) {
        violations.push_back({"no outcomes", 0.0});
        return violations;
    }
    const int d = povm.dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t r = 0; r < povm.outcomes.size(); ++r) {
        const auto& outcome = povm.outcomes[r];
        if (outcome.op.rows() != d || outcome.op.cols() != d) {
            violations.push_back({"outcome '" + outcome.result + "': dimension mismatch",
                                  static_cast<double>(outcome.op.rows())});
            continue;
        }
        double herm = hermiticity_defect(outcome.op);
        if (herm > 1e-9)
            violations.push_back({"outcome '" + outcome.result + "': hermiticity defect", herm});
        EigenSystem es = eig_hermitian(outcome.op, std::max(herm, hermitian_tol));
        if (es.eigenvalues(0) < -1e-9)
            violations.push_back(
                {"outcome '" + outcome.result + "': negative eigenvalue", -es.eigenvalues(0)});
        sum += outcome.op;
    }
    double completeness = max_abs(sum - CMatrix::Identity(d, d));
    if (completeness > 1e-9) violations.push_back({"completeness defect", completeness});
    return violations;
}

double d_povm(const POVM& povm, const DensityOperator& rho1, const DensityOperator& rho2) {
    if (rho1.dim() != rho2.dim() || povm.dim() != rho1.dim())
        throw DimensionMismatch("d_povm: dimension mismatch");
    double sum = 0.0;
    for (const auto& outcome : povm.outcomes)
        sum += std::abs(outcome_probability(outcome.op, rho1.matrix()) -
                        outcome_probability(outcome.op, rho2.matrix()));
    return 0.5 * sum;
}

double d_set(const MeasurementSet& set, const DensityOperator& rho1,
             const DensityOperator& rho2) {
    if (set.measurements.empty()) throw EmptySet("d_set: measurement set is empty");
    double best = 0.0;
    for (const auto& m : set.measurements) best = std::max(best, d_povm(m, rho1, rho2));
    return best;
}

double trace_distance(const DensityOperator& rho1, const DensityOperator& rho2) {
    if (rho1.dim() != rho2.dim()) throw DimensionMismatch("trace_distance: dimension mismatch");
    // The difference of two validated states carries up to ~2e-9 asymmetry.
    return 0.5 * trace_norm(rho1.matrix() - rho2.matrix(), 1e-8);
}

POVM helstrom_povm(const DensityOperator& rho1, const DensityOperator& rho2) {
    if (rho1.dim() != rho2.dim()) throw DimensionMismatch("helstrom_povm: dimension mismatch");
    const int d = rho1.dim();
    EigenSystem es = eig_hermitian(rho1.matrix() - rho2.matrix(), 1e-8);
    CMatrix plus = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        if (es.eigenvalues(i) >= 0.0)
            plus += es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint();
    CMatrix minus = CMatrix::Identity(d, d) - plus;
    return {"helstrom", {{"plus", plus}, {"minus", minus}}};
}

CorollaryReport corollary_report(const MeasurementSet& set, const Hamiltonian& H,
                                 const DensityOperator& rho0,
                                 const TimeAverageConvention& conv) {
    if (set.measurements.empty()) throw EmptySet("corollary_report: measurement set is empty");
    if (rho0.dim() != H.dim()) throw DimensionMismatch("corollary_report: dimension mismatch");
    require_nondegenerate_gaps(H);

    CorollaryReport r;
    r.d_eff = effective_dimension(H, rho0);
    double root = 4.0 * std::sqrt(r.d_eff);
    double weighted = 0.0;
    for (const auto& m : set.measurements)
        for (const auto& outcome : m.outcomes) weighted += delta(outcome.op);
    r.bound_weighted = weighted / root;
    r.bound_count = static_cast<double>(set.total_outcomes()) / root;

    DensityOperator omega = dephase(H, rho0);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(conv.n_samples));
    for (double t : sample_times(conv))
        samples.push_back(d_set(set, evolve(H, rho0, t), omega));
    MonteCarloEstimate est = mean_and_std_error(samples);
    r.empirical_avg = est.estimate;
    r.std_error = est.std_error;
    r.bound_holds = r.empirical_avg <= r.bound_weighted + 3.0 * r.std_error + 1e-9;
    return r;
}

}  // namespace eqlab
