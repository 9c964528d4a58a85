#include "eqlab/universality.hpp"

#include <algorithm>
#include <cmath>

namespace eqlab {

namespace {

// Simultaneous eigenbasis of (H, omega) spanning the subspace: within each
// energy level's sector of the subspace, diagonalize the compression of omega.
std::vector<CVector> subspace_omega_eigenbasis(const Hamiltonian& H, const CMatrix& projector,
                                               const CMatrix& omega) {
    std::vector<CVector> basis;
    for (const auto& lv : H.levels()) {
        CMatrix sector = lv.projector * projector * lv.projector;
        int rank = static_cast<int>(std::lround(sector.trace().real()));
        if (rank <= 0) continue;
        EigenSystem sector_es = eig_hermitian(0.5 * (sector + sector.adjoint()), 1e-6);
        CMatrix V(H.dim(), rank);  // eigenvectors with eigenvalue ~1 span the sector
        for (int i = 0; i < rank; ++i) V.col(i) = sector_es.eigenvectors.col(H.dim() - 1 - i);
        EigenSystem omega_es = eig_hermitian(V.adjoint() * omega * V, 1e-6);
        CMatrix rotated = V * omega_es.eigenvectors;
        for (int i = 0; i < rank; ++i) basis.push_back(rotated.col(i).normalized());
    }
    return basis;
}

}  // namespace

std::vector<PartitionViolation> validate_partition(const Hamiltonian& H,
                                                   const SubspacePartition& partition) {
    std::vector<PartitionViolation> violations;
    if (partition.projectors.empty()) {
        violations.push_back({"no projectors", 0.0});
        return violations;
    }
    const int d = H.dim();
    CMatrix h_matrix = H.matrix();
    CMatrix sum = CMatrix::Zero(d, d);
    for (int k = 0; k < partition.size(); ++k) {
        const CMatrix& P = partition.projectors[static_cast<std::size_t>(k)];
        std::string name = "projector " + std::to_string(k);
        if (P.rows() != d || P.cols() != d) {
            violations.push_back({name + ": dimension mismatch", static_cast<double>(P.rows())});
            continue;
        }
        if (double herm = hermiticity_defect(P); herm > 1e-9)
            violations.push_back({name + ": hermiticity defect", herm});
        if (double idem = max_abs(P * P - P); idem > 1e-9)
            violations.push_back({name + ": idempotency defect", idem});
        if (double comm = max_abs(P * h_matrix - h_matrix * P); comm > 1e-9)
            violations.push_back({name + ": commutator with H", comm});
        for (int j = 0; j < k; ++j) {
            double overlap = max_abs(partition.projectors[static_cast<std::size_t>(j)] * P);
            if (overlap > 1e-9)
                violations.push_back(
                    {name + ": overlaps projector " + std::to_string(j), overlap});
        }
        sum += P;
    }
    if (double comp = max_abs(sum - CMatrix::Identity(d, d)); comp > 1e-9)
        violations.push_back({"completeness defect", comp});
    return violations;
}

SubspacePartition microcanonical_partition(const Hamiltonian& H,
                                           const std::vector<double>& band_edges) {
    if (!std::is_sorted(band_edges.begin(), band_edges.end()))
        throw Error("microcanonical_partition: band edges must be ascending");
    double scale = std::max(std::abs(H.levels().front().energy),
                            std::abs(H.levels().back().energy));
    double tol = 1e-8 * H.spectral_range() + 1e-14 * (1.0 + scale);
    for (const auto& lv : H.levels())
        for (double edge : band_edges)
            if (std::abs(lv.energy - edge) <= tol)
                throw EdgeOnLevel("microcanonical_partition: edge " + std::to_string(edge) +
                                  " coincides with level energy " + std::to_string(lv.energy));

    const int n_bands = static_cast<int>(band_edges.size()) + 1;
    std::vector<CMatrix> sums(static_cast<std::size_t>(n_bands),
                              CMatrix::Zero(H.dim(), H.dim()));
    std::vector<int> counts(static_cast<std::size_t>(n_bands), 0);
    for (const auto& lv : H.levels()) {
        auto band = static_cast<std::size_t>(
            std::upper_bound(band_edges.begin(), band_edges.end(), lv.energy) -
            band_edges.begin());
        sums[band] += lv.projector;
        counts[band] += 1;
    }

    SubspacePartition partition;
    for (int k = 0; k < n_bands; ++k) {
        if (counts[static_cast<std::size_t>(k)] == 0) continue;
        partition.projectors.push_back(sums[static_cast<std::size_t>(k)]);
        partition.labels.push_back("band" + std::to_string(k));
    }
    return partition;
}

DensityOperator equilibrium_state(const SubspacePartition& partition, int k) {
    if (k < 0 || k >= partition.size())
        throw IndexOutOfRange("equilibrium_state: index " + std::to_string(k) + " out of " +
                              std::to_string(partition.size()));
    const CMatrix& P = partition.projectors[static_cast<std::size_t>(k)];
    return DensityOperator::unchecked(P / P.trace().real());
}

double eigenstate_epsilon(const MeasurementSet& set, const Hamiltonian& H,
                          const CMatrix& projector, const std::vector<CVector>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const CVector& v = basis[i];
        if (v.size() != H.dim())
            throw DimensionMismatch("eigenstate_epsilon: basis vector dimension mismatch");
        double support = (v.adjoint() * projector * v)(0).real() / v.squaredNorm();
        if (support < 1.0 - 1e-9)
            throw BasisNotInSubspace("eigenstate_epsilon: basis vector " + std::to_string(i) +
                                     " has subspace support " + std::to_string(support));
        double top_occupation = 0.0;
        for (const auto& lv : H.levels())
            top_occupation = std::max(
                top_occupation, (v.adjoint() * lv.projector * v)(0).real() / v.squaredNorm());
        if (top_occupation < 1.0 - 1e-9)
            throw NotEigenstates("eigenstate_epsilon: basis vector " + std::to_string(i) +
                                 " occupies more than one energy level");
    }
    double eps = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        DensityOperator rho_i = DensityOperator::from_pure(basis[i].normalized());
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            DensityOperator rho_j = DensityOperator::from_pure(basis[j].normalized());
            eps = std::max(eps, d_set(set, rho_i, rho_j));
        }
    }
    return eps;
}

UniversalityReport universality_report(const MeasurementSet& set, const Hamiltonian& H,
                                       const DensityOperator& rho0,
                                       const SubspacePartition& partition, int k,
                                       const TimeAverageConvention& conv) {
    if (rho0.dim() != H.dim())
        throw DimensionMismatch("universality_report: dimension mismatch");
    if (k < 0 || k >= partition.size())
        throw IndexOutOfRange("universality_report: subspace index " + std::to_string(k));
    const CMatrix& P = partition.projectors[static_cast<std::size_t>(k)];
    double support = P.cwiseProduct(rho0.matrix().transpose()).sum().real();
    if (support < 1.0 - 1e-9)
        throw StateOutsideSubspace("universality_report: tr(Pi_k rho0) = " +
                                   std::to_string(support));
    require_nondegenerate_gaps(H);

    UniversalityReport r;
    r.d_eff = effective_dimension(H, rho0);
    r.omega_k = equilibrium_state(partition, k);

    DensityOperator omega = dephase(H, rho0);
    r.epsilon = eigenstate_epsilon(set, H, P,
                                   subspace_omega_eigenbasis(H, P, omega.matrix()));
    r.bound = static_cast<double>(set.total_outcomes()) / (4.0 * std::sqrt(r.d_eff)) + r.epsilon;

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(conv.n_samples));
    for (double t : sample_times(conv))
        samples.push_back(d_set(set, evolve(H, rho0, t), r.omega_k));
    MonteCarloEstimate est = mean_and_std_error(samples);
    r.empirical_avg = est.estimate;
    r.std_error = est.std_error;
    r.bound_holds = r.empirical_avg <= r.bound + 3.0 * r.std_error + 1e-9;
    return r;
}

}  // namespace eqlab
