// spectral.hpp — Hamiltonians as distinct energy levels with spectral
// projectors, the non-degenerate-energy-gap check, the adapted eigenbasis of
// an initial state, and seeded random Hamiltonian ensembles.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/matrixkit.hpp"
#include "eqlab/rng.hpp"

namespace eqlab {

struct EnergyLevel {
    double energy;      // hbar = 1; energies are inverse time units
    CMatrix projector;  // Hermitian idempotent, rank = multiplicity
    int multiplicity;
};

// H = sum_n E_n P_n over distinct, strictly ascending energies E_n.
class Hamiltonian {
public:
    Hamiltonian(int dim, std::vector<EnergyLevel> levels);

    int dim() const { return dim_; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    const std::vector<EnergyLevel>& levels() const { return levels_; }
    const EnergyLevel& level(int n) const;

    CMatrix matrix() const;        // sum_n E_n P_n
    double spectral_range() const; // E_max - E_min
    double min_level_gap() const;  // smallest spacing between adjacent levels; 0 if one level

    // Deep structural check (projector algebra, completeness). Returns one
    // message per defect; empty means sound. The constructor only performs
    // cheap shape checks, so callers assembling levels by hand should run this.
    std::vector<std::string> validate(double tol = 1e-9) const;

private:
    int dim_;
    std::vector<EnergyLevel> levels_;
};

// A quadruple of level indices with (E_k - E_l) ~ (E_m - E_n).
struct GapViolation {
    int k, l, m, n;
    double mismatch;
};

struct GapReport {
    bool pass = true;
    std::vector<GapViolation> violations;   // within tolerance, not excused
    std::vector<GapViolation> near_misses;  // within (tolerance, 10*tolerance]
    double tolerance = 0.0;
};

struct AdaptedVector {
    double energy;
    CVector vec;        // unit vector inside its level's eigenspace
    Complex amplitude;  // overlap with psi0; real positive by convention
};
using AdaptedBasis = std::vector<AdaptedVector>;

// Occupations below this cutoff are treated as empty levels.
inline constexpr double occupation_cutoff = 1e-12;

// Groups the eigenvalues of a Hermitian matrix into distinct levels.
// Consecutive ascending eigenvalues join one level iff their gap is at most
// degeneracy_tol (default 1e-8 * spectral range, with a tiny absolute floor
// against rounding noise).
Hamiltonian build_hamiltonian(const CMatrix& M,
                              std::optional<double> degeneracy_tol = std::nullopt);

// Scans all quadruples of distinct level indices for coinciding energy gaps.
// A quadruple (k,l,m,n) is excused when (k==l and m==n) or (k==m and l==n);
// everything else with |(E_k-E_l)-(E_m-E_n)| <= gap_tol is a violation.
// Default gap_tol mirrors build_hamiltonian's relative tolerance.
GapReport check_nondegenerate_gaps(const Hamiltonian& H,
                                   std::optional<double> gap_tol = std::nullopt);

// Throws DegenerateGaps when the check fails; used as a precondition guard.
void require_nondegenerate_gaps(const Hamiltonian& H);

// One unit vector P_n|psi0>/sqrt(<psi0|P_n|psi0>) per level with occupation
// above occupation_cutoff; amplitudes are sqrt of the occupation.
AdaptedBasis adapted_eigenbasis(const Hamiltonian& H, const CVector& psi0);

enum class Ensemble { gue, spaced_spectrum };

// Deterministic under seed. gue draws (G + G^dag)/2 with i.i.d. complex
// Gaussian entries; spaced_spectrum draws ascending energies with i.i.d.
// uniform gaps and a Haar-random eigenbasis, re-jittering the energies until
// the gap check passes (at most 100 rounds, then ExhaustedRetries).
Hamiltonian random_hamiltonian(int d, Ensemble ensemble, std::uint64_t seed);

// Sampling primitives shared with the harness.
CMatrix gue_matrix(int d, Rng& rng);
CMatrix haar_unitary(int d, Rng& rng);
CVector haar_state(int d, Rng& rng);

}  // namespace eqlab
