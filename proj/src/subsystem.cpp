#include "eqlab/subsystem.hpp"

#include <cmath>

namespace eqlab {

namespace {

void check_split(const Hamiltonian& H, const BipartiteSplit& split) {
    if (split.d_s < 2 || split.d_b < 1)
        throw BadDimension("bipartite split requires d_s >= 2 and d_b >= 1");
    if (split.d_s * split.d_b != H.dim())
        throw DimensionMismatch("bipartite split " + std::to_string(split.d_s) + "x" +
                                std::to_string(split.d_b) + " does not match dimension " +
                                std::to_string(H.dim()));
}

}  // namespace

SchwingerBasis schwinger_basis(int d_s) {
    if (d_s < 2) throw BadDimension("schwinger_basis: d_s must be at least 2");
    SchwingerBasis basis;
    basis.d_s = d_s;
    basis.ops.reserve(static_cast<std::size_t>(d_s) * d_s);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d_s));
    const double step = 2.0 * M_PI / d_s;
    for (int k0 = 0; k0 < d_s; ++k0) {
        for (int k1 = 0; k1 < d_s; ++k1) {
            CMatrix F = CMatrix::Zero(d_s, d_s);
            for (int l = 0; l < d_s; ++l)
                F((l + k1) % d_s, l) = norm * std::polar(1.0, step * l * k0);
            basis.ops.push_back(std::move(F));
        }
    }
    return basis;
}

std::vector<Complex> expand_in_basis(const CMatrix& M, const SchwingerBasis& basis) {
    if (M.rows() != basis.d_s || M.cols() != basis.d_s)
        throw DimensionMismatch("expand_in_basis: matrix is not " + std::to_string(basis.d_s) +
                                "x" + std::to_string(basis.d_s));
    std::vector<Complex> coeffs;
    coeffs.reserve(basis.ops.size());
    for (const auto& F : basis.ops)
        coeffs.push_back(F.conjugate().cwiseProduct(M).sum());  // tr(F^dag M)
    return coeffs;
}

double subsystem_bound(const Hamiltonian& H, const DensityOperator& rho0,
                       const BipartiteSplit& split) {
    check_split(H, split);
    if (rho0.dim() != H.dim()) throw DimensionMismatch("subsystem_bound: dimension mismatch");
    require_nondegenerate_gaps(H);
    double d_eff = effective_dimension(H, rho0);
    return 0.5 * std::sqrt(static_cast<double>(split.d_s) * split.d_s / d_eff);
}

MonteCarloEstimate avg_subsystem_distance(const Hamiltonian& H, const DensityOperator& rho0,
                                          const BipartiteSplit& split,
                                          const TimeAverageConvention& conv) {
    check_split(H, split);
    if (rho0.dim() != H.dim())
        throw DimensionMismatch("avg_subsystem_distance: dimension mismatch");
    CMatrix omega_s =
        partial_trace(dephase(H, rho0).matrix(), split.d_s, split.d_b, Keep::subsystem);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(conv.n_samples));
    for (double t : sample_times(conv)) {
        CMatrix rho_s = partial_trace(evolve(H, rho0, t).matrix(), split.d_s, split.d_b,
                                      Keep::subsystem);
        samples.push_back(0.5 * trace_norm(rho_s - omega_s, 1e-8));
    }
    return mean_and_std_error(samples);
}

}  // namespace eqlab
