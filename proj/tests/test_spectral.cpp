#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "eqlab/dynamics.hpp"
#include "eqlab/spectral.hpp"
#include "helpers.hpp"

using namespace eqlab;
using testkit::max_abs_diff;

namespace {

Hamiltonian from_energies(const std::vector<double>& energies) {
    // diagonal Hamiltonian with the given ascending spectrum
    const int d = static_cast<int>(energies.size());
    CMatrix M = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) M(i, i) = energies[static_cast<std::size_t>(i)];
    return build_hamiltonian(M);
}

// brute-force count of coinciding ordered gap pairs on an equally spaced ladder
int arithmetic_quadruples(int levels) {
    int count = 0;
    for (int m = 1; m < levels; ++m) {
        int pairs = levels - m;  // pairs with gap m steps
        count += pairs * (pairs - 1) / 2;
    }
    return count;
}

}  // namespace

TEST_CASE("build_hamiltonian groups degenerate levels of sigma_x tensor I") {
    for (int k : {2, 3, 5}) {
        CMatrix H = tensor(testkit::pauli_x(), CMatrix::Identity(k, k));
        Hamiltonian ham = build_hamiltonian(H);
        REQUIRE(ham.num_levels() == 2);
        CHECK(ham.level(0).energy == doctest::Approx(-1.0));
        CHECK(ham.level(1).energy == doctest::Approx(1.0));
        CHECK(ham.level(0).multiplicity == k);
        CHECK(ham.level(1).multiplicity == k);
        CHECK(ham.validate().empty());
    }
}

TEST_CASE("build_hamiltonian on diag(0,0,1)") {
    CMatrix M = CMatrix::Zero(3, 3);
    M(2, 2) = 1.0;
    Hamiltonian ham = build_hamiltonian(M);
    REQUIRE(ham.num_levels() == 2);
    CHECK(ham.level(0).multiplicity == 2);
    CHECK(ham.level(1).multiplicity == 1);
    CHECK(ham.level(0).energy == doctest::Approx(0.0));
    CHECK(ham.level(1).energy == doctest::Approx(1.0));
}

TEST_CASE("build_hamiltonian on a GUE draw yields simple levels") {
    auto rng = Rng::keyed(3, 0, "gue-simple");
    Hamiltonian ham = build_hamiltonian(testkit::random_hermitian(8, rng));
    CHECK(ham.num_levels() == 8);
    for (const auto& lv : ham.levels()) CHECK(lv.multiplicity == 1);
}

TEST_CASE("build_hamiltonian rejects ambiguous near-degenerate chains") {
    const double tol = 1e-6;
    const int d = 13;
    CMatrix M = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) M(i, i) = i * 0.9 * tol;  // chain spans 10.8 * tol
    CHECK_THROWS_AS(build_hamiltonian(M, tol), AmbiguousClustering);
}

TEST_CASE("completeness holds for constructed Hamiltonians") {
    auto rng = Rng::keyed(4, 0, "complete");
    for (int rep = 0; rep < 5; ++rep) {
        Hamiltonian ham = build_hamiltonian(testkit::random_hermitian(10, rng));
        CMatrix sum = CMatrix::Zero(10, 10);
        for (const auto& lv : ham.levels()) sum += lv.projector;
        CHECK(max_abs_diff(sum, CMatrix::Identity(10, 10)) <= 1e-9);
    }
}

TEST_CASE("gap check rejects noninteracting product Hamiltonians") {
    // H = sigma_z x I + I x diag(0,1); energies {-1,0,1,2} are equally spaced
    CMatrix hb = CMatrix::Zero(2, 2);
    hb(1, 1) = 1.0;
    CMatrix H = tensor(testkit::pauli_z(), CMatrix::Identity(2, 2)) +
                tensor(CMatrix::Identity(2, 2), hb);
    Hamiltonian ham = build_hamiltonian(H);
    GapReport report = check_nondegenerate_gaps(ham);
    CHECK_FALSE(report.pass);
    REQUIRE_FALSE(report.violations.empty());
    for (const auto& v : report.violations) {
        double lhs = ham.level(v.k).energy - ham.level(v.l).energy;
        double rhs = ham.level(v.m).energy - ham.level(v.n).energy;
        CHECK(std::abs(lhs - rhs) <= report.tolerance);
        bool excused = (v.k == v.l && v.m == v.n) || (v.k == v.m && v.l == v.n);
        CHECK_FALSE(excused);
    }
}

TEST_CASE("gap check accepts an irregular spectrum") {
    // oracle: enumerate the six pair gaps and confirm they are all well separated
    std::vector<double> energies = {0.0, 1.1, 2.3, 3.6};
    std::multiset<double> gaps;
    for (std::size_t a = 0; a < energies.size(); ++a)
        for (std::size_t b = a + 1; b < energies.size(); ++b)
            gaps.insert(energies[b] - energies[a]);
    double min_sep = 1e9;
    for (auto it = gaps.begin(); std::next(it) != gaps.end(); ++it)
        min_sep = std::min(min_sep, *std::next(it) - *it);
    CHECK(min_sep > 0.05);

    GapReport report = check_nondegenerate_gaps(from_energies(energies));
    CHECK(report.pass);
    CHECK(report.violations.empty());
}

TEST_CASE("gap check flags every arithmetic quadruple of an equally spaced ladder") {
    for (int levels : {3, 5, 8}) {
        std::vector<double> energies;
        for (int i = 0; i < levels; ++i) energies.push_back(0.75 * i);
        GapReport report = check_nondegenerate_gaps(from_energies(energies));
        CHECK_FALSE(report.pass);
        CHECK(static_cast<int>(report.violations.size()) == arithmetic_quadruples(levels));
    }
}

TEST_CASE("gap check on {0,1,2} reports the middle quadruple") {
    GapReport report = check_nondegenerate_gaps(from_energies({0.0, 1.0, 2.0}));
    CHECK_FALSE(report.pass);
    REQUIRE(report.violations.size() == 1);
    const GapViolation& v = report.violations.front();
    CHECK(v.k == 1);
    CHECK(v.l == 0);
    CHECK(v.m == 2);
    CHECK(v.n == 1);
}

TEST_CASE("gap check refuses more than 64 levels") {
    std::vector<double> energies;
    double e = 0.0;
    auto rng = Rng::keyed(5, 0, "many-levels");
    for (int i = 0; i < 65; ++i) {
        energies.push_back(e);
        e += rng.uniform(0.5, 1.5);
    }
    CHECK_THROWS_AS(check_nondegenerate_gaps(from_energies(energies)), TooManyLevels);
}

TEST_CASE("adapted basis of an equal superposition") {
    Hamiltonian ham = build_hamiltonian(testkit::pauli_z());
    CVector psi(2);
    psi << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    AdaptedBasis basis = adapted_eigenbasis(ham, psi);
    REQUIRE(basis.size() == 2);
    for (const auto& entry : basis) {
        CHECK(std::abs(entry.amplitude - Complex(1 / std::sqrt(2.0), 0)) <= 1e-12);
        CHECK(entry.vec.norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("adapted basis of an eigenvector is a single entry") {
    Hamiltonian ham = build_hamiltonian(testkit::pauli_z());
    CVector psi(2);
    psi << 0, 1;
    AdaptedBasis basis = adapted_eigenbasis(ham, psi);
    REQUIRE(basis.size() == 1);
    CHECK(std::abs(basis[0].amplitude - Complex(1, 0)) <= 1e-12);
}

TEST_CASE("adapted basis splits |00> across the sigma_x x I levels") {
    Hamiltonian ham = build_hamiltonian(tensor(testkit::pauli_x(), CMatrix::Identity(2, 2)));
    CVector psi = CVector::Zero(4);
    psi(0) = 1.0;
    AdaptedBasis basis = adapted_eigenbasis(ham, psi);
    REQUIRE(basis.size() == 2);
    CVector expected_minus(4), expected_plus(4);
    expected_minus << 1 / std::sqrt(2.0), 0, -1 / std::sqrt(2.0), 0;
    expected_plus << 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0), 0;
    CHECK(std::abs(basis[0].amplitude - Complex(1 / std::sqrt(2.0), 0)) <= 1e-12);
    CHECK(std::abs(basis[1].amplitude - Complex(1 / std::sqrt(2.0), 0)) <= 1e-12);
    CHECK((basis[0].vec - expected_minus).norm() <= 1e-12);
    CHECK((basis[1].vec - expected_plus).norm() <= 1e-12);
}

TEST_CASE("adapted basis reconstructs and reproduces the evolution") {
    auto rng = Rng::keyed(6, 0, "adapted");
    Hamiltonian ham = build_hamiltonian(testkit::random_hermitian(8, rng));
    CVector psi = testkit::random_unit(8, rng);
    AdaptedBasis basis = adapted_eigenbasis(ham, psi);

    CVector rebuilt = CVector::Zero(8);
    for (const auto& entry : basis) {
        rebuilt += entry.amplitude * entry.vec;
        // each vector stays inside its level eigenspace
        for (const auto& lv : ham.levels()) {
            if (lv.energy == entry.energy)
                CHECK((lv.projector * entry.vec - entry.vec).norm() <= 1e-9);
        }
    }
    CHECK((rebuilt - psi).norm() <= 1e-9);

    // evolving psi under H equals the phase-rotated adapted expansion
    for (int rep = 0; rep < 100; ++rep) {
        double t = rng.uniform(0.0, 50.0);
        CVector direct = propagator(ham, t) * psi;
        CVector expanded = CVector::Zero(8);
        for (const auto& entry : basis)
            expanded += entry.amplitude * std::polar(1.0, -entry.energy * t) * entry.vec;
        CHECK((direct - expanded).norm() <= 1e-9);
    }
}

TEST_CASE("adapted basis rejects unnormalized states") {
    Hamiltonian ham = build_hamiltonian(testkit::pauli_z());
    CVector psi(2);
    psi << 1.0, 1.0;
    CHECK_THROWS_AS(adapted_eigenbasis(ham, psi), InvalidState);
}

TEST_CASE("random_hamiltonian is deterministic under seed") {
    Hamiltonian a = random_hamiltonian(4, Ensemble::gue, 7);
    Hamiltonian b = random_hamiltonian(4, Ensemble::gue, 7);
    REQUIRE(a.num_levels() == b.num_levels());
    for (int n = 0; n < a.num_levels(); ++n) {
        CHECK(a.level(n).energy == b.level(n).energy);
        CHECK(max_abs_diff(a.level(n).projector, b.level(n).projector) == 0.0);
    }
    Hamiltonian c = random_hamiltonian(4, Ensemble::gue, 8);
    CHECK(std::abs(a.level(0).energy - c.level(0).energy) > 1e-12);
}

TEST_CASE("spaced-spectrum draws pass the gap check by construction") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 42ull}) {
        Hamiltonian ham = random_hamiltonian(8, Ensemble::spaced_spectrum, seed);
        CHECK(check_nondegenerate_gaps(ham).pass);
        CHECK(ham.validate().empty());
    }
}

TEST_CASE("2-dimensional GUE draws have two distinct levels") {
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        CHECK(random_hamiltonian(2, Ensemble::gue, seed).num_levels() == 2);
}
