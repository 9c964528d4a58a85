#include "eqlab/spectral.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eqlab {

namespace {

// Relative tolerance with a small absolute floor so that exactly degenerate
// spectra (e.g. multiples of the identity) cluster despite rounding noise.
double default_spectral_tol(double range, double max_abs_energy) {
    return 1e-8 * range + 1e-14 * (1.0 + max_abs_energy);
}

}  // namespace

Hamiltonian::Hamiltonian(int dim, std::vector<EnergyLevel> levels)
    : dim_(dim), levels_(std::move(levels)) {
    if (dim_ < 1) throw BadDimension("Hamiltonian: dimension must be positive");
    if (levels_.empty()) throw Error("Hamiltonian: no energy levels");
    int total_mult = 0;
    for (std::size_t n = 0; n < levels_.size(); ++n) {
        const EnergyLevel& lv = levels_[n];
        if (lv.projector.rows() != dim_ || lv.projector.cols() != dim_)
            throw DimensionMismatch("Hamiltonian: projector of level " + std::to_string(n) +
                                    " is not " + std::to_string(dim_) + "x" + std::to_string(dim_));
        double tr = lv.projector.trace().real();
        if (std::abs(tr - lv.multiplicity) > 1e-9)
            throw Error("Hamiltonian: level " + std::to_string(n) +
                        " multiplicity does not match projector trace");
        if (n > 0 && !(levels_[n].energy > levels_[n - 1].energy))
            throw Error("Hamiltonian: level energies must be strictly ascending");
        total_mult += lv.multiplicity;
    }
    if (total_mult != dim_)
        throw Error("Hamiltonian: multiplicities sum to " + std::to_string(total_mult) +
                    ", expected " + std::to_string(dim_));
}

const EnergyLevel& Hamiltonian::level(int n) const {
    if (n < 0 || n >= num_levels())
        throw IndexOutOfRange("Hamiltonian::level: index " + std::to_string(n));
    return levels_[static_cast<std::size_t>(n)];
}

CMatrix Hamiltonian::matrix() const {
    CMatrix H = CMatrix::Zero(dim_, dim_);
    for (const auto& lv : levels_) H += lv.energy * lv.projector;
    return H;
}

double Hamiltonian::spectral_range() const {
    return levels_.back().energy - levels_.front().energy;
}

double Hamiltonian::min_level_gap() const {
    if (levels_.size() < 2) return 0.0;
    double g = levels_[1].energy - levels_[0].energy;
    for (std::size_t n = 2; n < levels_.size(); ++n)
        g = std::min(g, levels_[n].energy - levels_[n - 1].energy);
    return g;
}

std::vector<std::string> Hamiltonian::validate(double tol) const {
    std::vector<std::string> defects;
    CMatrix completeness = CMatrix::Zero(dim_, dim_);
    for (std::size_t n = 0; n < levels_.size(); ++n) {
        const CMatrix& P = levels_[n].projector;
        double herm = hermiticity_defect(P);
        if (herm > tol)
            defects.push_back("level " + std::to_string(n) + ": hermiticity defect " +
                              std::to_string(herm));
        double idem = max_abs(P * P - P);
        if (idem > tol)
            defects.push_back("level " + std::to_string(n) + ": idempotency defect " +
                              std::to_string(idem));
        completeness += P;
    }
    double comp = max_abs(completeness - CMatrix::Identity(dim_, dim_));
    if (comp > tol) defects.push_back("completeness defect " + std::to_string(comp));
    return defects;
}

Hamiltonian build_hamiltonian(const CMatrix& M, std::optional<double> degeneracy_tol) {
    EigenSystem es = eig_hermitian(M);
    const int d = static_cast<int>(M.rows());
    double range = es.eigenvalues(d - 1) - es.eigenvalues(0);
    double scale = std::max(std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(d - 1)));
    double tol = degeneracy_tol.value_or(default_spectral_tol(range, scale));

    std::vector<EnergyLevel> levels;
    int start = 0;
    for (int i = 1; i <= d; ++i) {
        bool close_cluster = (i == d) || (es.eigenvalues(i) - es.eigenvalues(i - 1) > tol);
        if (!close_cluster) continue;
        int len = i - start;
        double span = es.eigenvalues(i - 1) - es.eigenvalues(start);
        if (span > 10.0 * tol)
            throw AmbiguousClustering(
                "build_hamiltonian: near-degenerate chain spans " + std::to_string(span) +
                " > 10 * " + std::to_string(tol));
        CMatrix V = es.eigenvectors.middleCols(start, len);
        double energy = es.eigenvalues.segment(start, len).mean();
        levels.push_back({energy, V * V.adjoint(), len});
        start = i;
    }

    Hamiltonian H(d, std::move(levels));
    auto defects = H.validate();
    if (!defects.empty())
        throw Error("build_hamiltonian: constructed levels are unsound: " + defects.front());
    return H;
}

GapReport check_nondegenerate_gaps(const Hamiltonian& H, std::optional<double> gap_tol) {
    const int D = H.num_levels();
    if (D > 64)
        throw TooManyLevels("check_nondegenerate_gaps: " + std::to_string(D) +
                            " levels exceeds the 64-level scan limit");
    double scale = std::max(std::abs(H.levels().front().energy),
                            std::abs(H.levels().back().energy));
    GapReport report;
    report.tolerance = gap_tol.value_or(default_spectral_tol(H.spectral_range(), scale));

    // Signed gaps of ordered pairs (k > l). Any violating quadruple is, up to
    // the excused symmetries, a pair of distinct ordered pairs with matching
    // gap, so scanning pairs of pairs covers the full quadruple space.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(D) * (D - 1) / 2);
    for (int k = 1; k < D; ++k)
        for (int l = 0; l < k; ++l) pairs.emplace_back(k, l);

    auto gap = [&](const std::pair<int, int>& p) {
        return H.level(p.first).energy - H.level(p.second).energy;
    };
    for (std::size_t a = 0; a < pairs.size(); ++a) {
        for (std::size_t b = a + 1; b < pairs.size(); ++b) {
            double mismatch = std::abs(gap(pairs[a]) - gap(pairs[b]));
            if (mismatch <= report.tolerance) {
                report.violations.push_back({pairs[a].first, pairs[a].second, pairs[b].first,
                                             pairs[b].second, mismatch});
            } else if (mismatch <= 10.0 * report.tolerance) {
                report.near_misses.push_back({pairs[a].first, pairs[a].second, pairs[b].first,
                                              pairs[b].second, mismatch});
            }
        }
    }
    report.pass = report.violations.empty();
    return report;
}

void require_nondegenerate_gaps(const Hamiltonian& H) {
    GapReport report = check_nondegenerate_gaps(H);
    if (report.pass) return;
    const GapViolation& v = report.violations.front();
    throw DegenerateGaps("Hamiltonian has degenerate energy gaps: (E" + std::to_string(v.k) +
                         " - E" + std::to_string(v.l) + ") = (E" + std::to_string(v.m) + " - E" +
                         std::to_string(v.n) + ") within " + std::to_string(report.tolerance) +
                         " (" + std::to_string(report.violations.size()) + " violation(s))");
}

AdaptedBasis adapted_eigenbasis(const Hamiltonian& H, const CVector& psi0) {
    if (psi0.size() != H.dim())
        throw DimensionMismatch("adapted_eigenbasis: state dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw InvalidState("adapted_eigenbasis: psi0 is not normalized");
    AdaptedBasis basis;
    for (const auto& lv : H.levels()) {
        CVector proj = lv.projector * psi0;
        double occupation = std::max(proj.squaredNorm(), 0.0);
        if (occupation <= occupation_cutoff) continue;
        double amplitude = std::sqrt(occupation);
        basis.push_back({lv.energy, proj / amplitude, Complex(amplitude, 0.0)});
    }
    return basis;
}

CMatrix gue_matrix(int d, Rng& rng) {
    CMatrix G(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) G(i, j) = rng.complex_gaussian();
    return 0.5 * (G + G.adjoint());
}

CMatrix haar_unitary(int d, Rng& rng) {
    CMatrix G(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) G(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<CMatrix> qr(G);
    CMatrix Q = qr.householderQ();
    CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the diagonal phases of R; otherwise Q is not Haar distributed.
    for (int j = 0; j < d; ++j) {
        Complex r = R(j, j);
        Q.col(j) *= (std::abs(r) > 0.0) ? r / std::abs(r) : Complex(1.0, 0.0);
    }
    return Q;
}

CVector haar_state(int d, Rng& rng) {
    CVector v(d);
    for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
    return v / v.norm();
}

Hamiltonian random_hamiltonian(int d, Ensemble ensemble, std::uint64_t seed) {
    if (d < 2) throw BadDimension("random_hamiltonian: dimension must be at least 2");
    if (ensemble == Ensemble::gue) {
        Rng rng = Rng::keyed(seed, 0, "gue");
        return build_hamiltonian(gue_matrix(d, rng));
    }

    Rng rng = Rng::keyed(seed, 0, "spaced-spectrum");
    std::vector<double> energies(d);
    energies[0] = 0.0;
    for (int i = 1; i < d; ++i) energies[i] = energies[i - 1] + rng.uniform(0.5, 1.5);
    CMatrix Q = haar_unitary(d, rng);

    for (int round = 0; round < 100; ++round) {
        std::vector<EnergyLevel> levels;
        levels.reserve(d);
        for (int i = 0; i < d; ++i) {
            CVector q = Q.col(i);
            levels.push_back({energies[i], q * q.adjoint(), 1});
        }
        Hamiltonian H(d, std::move(levels));
        if (check_nondegenerate_gaps(H).pass) {
            auto defects = H.validate();
            if (!defects.empty())
                throw Error("random_hamiltonian: unsound construction: " + defects.front());
            return H;
        }
        for (int i = 1; i < d; ++i) energies[i] += rng.uniform(-0.05, 0.05);
        std::sort(energies.begin(), energies.end());
    }
    throw ExhaustedRetries("random_hamiltonian: spaced-spectrum gap check failed 100 rounds");
}

}  // namespace eqlab
