#include "eqlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace eqlab {

DensityOperator DensityOperator::from_matrix(const CMatrix& rho) {
    if (rho.rows() != rho.cols()) throw NonSquare("DensityOperator: matrix is not square");
    if (!is_finite(rho)) throw InvalidState("DensityOperator: non-finite entries");
    double herm = hermiticity_defect(rho);
    if (herm > 1e-9)
        throw InvalidState("DensityOperator: hermiticity defect " + std::to_string(herm));
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-9)
        throw InvalidState("DensityOperator: trace " + std::to_string(tr) + " is not 1");
    EigenSystem es = eig_hermitian(rho, 1e-9);
    if (es.eigenvalues(0) < -1e-9)
        throw InvalidState("DensityOperator: negative eigenvalue " +
                           std::to_string(es.eigenvalues(0)));
    return DensityOperator(0.5 * (rho + rho.adjoint()), std::nullopt);
}

DensityOperator DensityOperator::from_pure(const CVector& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw InvalidState("DensityOperator: pure state vector is not normalized");
    return DensityOperator(psi * psi.adjoint(), psi);
}

DensityOperator DensityOperator::unchecked(CMatrix rho, std::optional<CVector> pure) {
    return DensityOperator(std::move(rho), std::move(pure));
}

const CVector& DensityOperator::pure_vector() const {
    if (!pure_) throw InvalidState("DensityOperator: no pure-state vector stored");
    return *pure_;
}

double DensityOperator::purity() const {
    // tr(rho^2) = |rho|_F^2 for Hermitian rho
    return rho_.squaredNorm();
}

TimeAverageConvention default_convention(const Hamiltonian& H, std::uint64_t seed,
                                         int n_samples) {
    double gap = H.min_level_gap();
    double t_max = (gap > 0.0) ? 1e3 / gap : 1.0;
    return {t_max, n_samples, seed};
}

std::vector<double> sample_times(const TimeAverageConvention& conv) {
    if (conv.t_max <= 0.0) throw Error("sample_times: t_max must be positive");
    if (conv.n_samples < 1) throw Error("sample_times: n_samples must be at least 1");
    Rng rng = Rng::keyed(conv.seed, 0, "times");
    std::vector<double> times(static_cast<std::size_t>(conv.n_samples));
    for (auto& t : times) t = rng.uniform(0.0, conv.t_max);
    return times;
}

MonteCarloEstimate mean_and_std_error(const std::vector<double>& samples) {
    const auto n = static_cast<double>(samples.size());
    if (samples.empty()) return {0.0, 0.0};
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

CMatrix propagator(const Hamiltonian& H, double t) {
    CMatrix U = CMatrix::Zero(H.dim(), H.dim());
    for (const auto& lv : H.levels())
        U += std::polar(1.0, -lv.energy * t) * lv.projector;
    return U;
}

DensityOperator evolve(const Hamiltonian& H, const DensityOperator& rho0, double t) {
    if (rho0.dim() != H.dim()) throw DimensionMismatch("evolve: dimension mismatch");
    CMatrix U = propagator(H, t);
    if (rho0.is_pure()) {
        CVector psi = U * rho0.pure_vector();
        return DensityOperator::unchecked(psi * psi.adjoint(), psi);
    }
    return DensityOperator::unchecked(U * rho0.matrix() * U.adjoint());
}

DensityOperator dephase(const Hamiltonian& H, const DensityOperator& rho0) {
    if (rho0.dim() != H.dim()) throw DimensionMismatch("dephase: dimension mismatch");
    CMatrix omega = CMatrix::Zero(H.dim(), H.dim());
    for (const auto& lv : H.levels())
        omega += lv.projector * rho0.matrix() * lv.projector;
    return DensityOperator::unchecked(std::move(omega));
}

double effective_dimension(const Hamiltonian& H, const DensityOperator& rho0) {
    if (rho0.dim() != H.dim())
        throw DimensionMismatch("effective_dimension: dimension mismatch");
    double sum_sq = 0.0;
    for (const auto& lv : H.levels()) {
        double p = std::max((lv.projector.cwiseProduct(rho0.matrix().transpose())).sum().real(),
                            0.0);
        sum_sq += p * p;
    }
    return 1.0 / sum_sq;
}

Purification purify(const DensityOperator& rho0) {
    const int d = rho0.dim();
    CVector phi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
    if (rho0.is_pure()) {
        // |psi>|0> exactly
        for (int a = 0; a < d; ++a) phi(static_cast<Eigen::Index>(a) * d) = rho0.pure_vector()(a);
        return {phi, d};
    }
    EigenSystem es = eig_hermitian(rho0.matrix(), 1e-9);
    if (es.eigenvalues(0) < -1e-9)
        throw InvalidState("purify: input is not positive semidefinite");
    // Descending order so the dominant eigenvector pairs with ancilla |0>.
    for (int b = 0; b < d; ++b) {
        int i = d - 1 - b;
        double lambda = std::max(es.eigenvalues(i), 0.0);
        if (lambda <= 0.0) continue;
        double w = std::sqrt(lambda);
        for (int a = 0; a < d; ++a) phi(static_cast<Eigen::Index>(a) * d + b) = w * es.eigenvectors(a, i);
    }
    phi /= phi.norm();
    return {phi, d};
}

Hamiltonian lift_hamiltonian(const Hamiltonian& H) {
    const int d = H.dim();
    CMatrix eye = CMatrix::Identity(d, d);
    std::vector<EnergyLevel> levels;
    levels.reserve(H.levels().size());
    for (const auto& lv : H.levels())
        levels.push_back({lv.energy, tensor(lv.projector, eye), lv.multiplicity * d});
    return Hamiltonian(d * d, std::move(levels));
}

}  // namespace eqlab
