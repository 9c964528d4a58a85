#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "eqlab/harness.hpp"
#include "helpers.hpp"

using namespace eqlab;
using harness::ExperimentConfig;
using io::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("eqlab-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("matrix json round trip") {
    auto rng = Rng::keyed(90, 0, "json");
    CMatrix M = testkit::random_complex(3, 4, rng);
    CMatrix back = io::matrix_from_json(io::matrix_to_json(M), "test");
    CHECK(testkit::max_abs_diff(M, back) == 0.0);

    CVector v = testkit::random_unit(5, rng);
    CVector vback = io::vector_from_json(io::vector_to_json(v), "test");
    CHECK((v - vback).norm() == 0.0);

    CHECK_THROWS_AS(io::matrix_from_json(json::array(), "test"), ConfigError);
    CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[1,2],[3]]"), "test"), ConfigError);
}

TEST_CASE("hamiltonian json accepts both encodings") {
    auto rng = Rng::keyed(91, 0, "hjson");
    CMatrix M = testkit::random_hermitian(4, rng);
    Hamiltonian from_dense =
        io::hamiltonian_from_json(json{{"matrix", io::matrix_to_json(M)}}, "test");
    EigenSystem es = eig_hermitian(M);
    json energies = json::array();
    for (int i = 0; i < 4; ++i) energies.push_back(es.eigenvalues(i));
    Hamiltonian from_pairs = io::hamiltonian_from_json(
        json{{"energies", energies}, {"eigenvectors", io::matrix_to_json(es.eigenvectors)}},
        "test");
    REQUIRE(from_dense.num_levels() == from_pairs.num_levels());
    for (int n = 0; n < from_dense.num_levels(); ++n)
        CHECK(std::abs(from_dense.level(n).energy - from_pairs.level(n).energy) <= 1e-12);

    CHECK_THROWS_AS(io::hamiltonian_from_json(json{{"energies", energies}}, "test"),
                    ConfigError);
    // non-Hermitian dense input is a config error, not a crash
    CMatrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(
        io::hamiltonian_from_json(json{{"matrix", io::matrix_to_json(bad)}}, "test"),
        ConfigError);
}

TEST_CASE("config parsing reports field paths") {
    CHECK_THROWS_WITH_AS(harness::parse_config(json{{"fruit", 1}}, ""),
                         "config.mode: required string", ConfigError);
    CHECK_THROWS_AS(harness::parse_config(json{{"mode", "dance"}}, ""), ConfigError);
    ExperimentConfig config =
        harness::parse_config(json{{"mode", "counterexample"}, {"k", 7}, {"seed", 3}}, "");
    CHECK(config.counterexample_k == 7);
    CHECK(config.seed == 3);
    CHECK(config.n_samples == 2000);
}

TEST_CASE("make_measurements rejects invalid POVM files with the violation list") {
    json bad{{"label", "broken"},
             {"outcomes", json::array({json{{"result", "a"},
                                            {"matrix", io::matrix_to_json(
                                                           0.6 * CMatrix::Identity(2, 2))}}})}};
    try {
        harness::make_measurements(json::array({bad}), "");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("completeness defect") != std::string::npos);
    }
}

TEST_CASE("counterexample mode reproduces the degenerate-Hamiltonian numbers") {
    ExperimentConfig config;
    config.mode = "counterexample";
    config.counterexample_k = 5;
    config.n_samples = 400;
    harness::RunOutcome outcome = harness::run(config);
    const json& t1 = outcome.report["theorem1"];
    CHECK(t1["sigma_sq"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(t1["delta"].get<double>() == doctest::Approx(2.0));
    CHECK(t1["d_eff"].get<double>() == doctest::Approx(2.0));
    CHECK(t1["purity_omega"].get<double>() == doctest::Approx(0.1));
    CHECK(t1["reimann_purity_bound"].get<double>() == doctest::Approx(0.4));
    CHECK(t1["tight"].get<bool>());
    CHECK(t1["exceeds_purity_bound"].get<bool>());
    CHECK_FALSE(outcome.violation_found);
}

TEST_CASE("check-gaps mode flags the product Hamiltonian with a quadruple") {
    TempDir tmp;
    CMatrix hb = CMatrix::Zero(2, 2);
    hb(1, 1) = 1.0;
    CMatrix H = tensor(testkit::pauli_z(), CMatrix::Identity(2, 2)) +
                tensor(CMatrix::Identity(2, 2), hb);
    io::write_json_file(tmp.file("H.json"), json{{"matrix", io::matrix_to_json(H)}});

    ExperimentConfig config;
    config.mode = "check-gaps";
    config.hamiltonian = json{{"file", tmp.file("H.json")}};
    harness::RunOutcome outcome = harness::run(config);
    CHECK(outcome.violation_found);
    const json& gr = outcome.report["gap_report"];
    CHECK_FALSE(gr["pass"].get<bool>());
    REQUIRE_FALSE(gr["violations"].empty());
    const json& v = gr["violations"][0];
    for (const char* key : {"k", "l", "m", "n", "E_k", "E_l", "E_m", "E_n", "mismatch"})
        CHECK(v.contains(key));
}

TEST_CASE("theorem1 mode writes the documented report and time series") {
    TempDir tmp;
    ExperimentConfig config;
    config.mode = "theorem1";
    config.hamiltonian = json{{"ensemble", "spaced-spectrum"}, {"dim", 6}};
    config.state = json{{"kind", "haar-pure"}};
    config.observable = json{{"kind", "random"}};
    config.seed = 11;
    config.n_samples = 150;
    config.report_path = tmp.file("report.json");
    config.timeseries_path = tmp.file("series.csv");
    harness::RunOutcome outcome = harness::run(config);
    CHECK_FALSE(outcome.violation_found);

    json report = io::load_json_file(tmp.file("report.json"));
    for (const char* key : {"mode", "dim", "theorem1", "sampled_sigma_sq"})
        CHECK(report.contains(key));
    for (const char* key : {"sigma_sq", "bound_delta", "bound_norm", "reimann_purity_bound",
                            "d_eff", "delta", "operator_norm", "purity_omega", "tight",
                            "exceeds_purity_bound"})
        CHECK(report["theorem1"].contains(key));

    std::string csv = slurp(tmp.file("series.csv"));
    CHECK(csv.rfind("t,expectation_re,expectation_im,deviation_sq\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 151);
}

TEST_CASE("state and observable materialization kinds") {
    Hamiltonian ham = random_hamiltonian(6, Ensemble::gue, 13);
    DensityOperator pure = harness::make_state(json{{"kind", "haar-pure"}}, ham, 1, "");
    CHECK(pure.is_pure());
    DensityOperator mix = harness::make_state(json{{"kind", "eigenmix"}}, ham, 1, "");
    CHECK(testkit::max_abs_diff(dephase(ham, mix).matrix(), mix.matrix()) <= 1e-12);
    DensityOperator ranked =
        harness::make_state(json{{"kind", "rank-mixed"}, {"rank", 2}}, ham, 1, "");
    CHECK_FALSE(ranked.is_pure());
    CHECK(ranked.purity() < 1.0);
    CHECK_THROWS_AS(harness::make_state(json{{"kind", "plasma"}}, ham, 1, ""), ConfigError);

    CMatrix A = harness::make_observable(json{{"kind", "random"}}, 6, 1, "");
    CHECK(hermiticity_defect(A) > 1e-6);  // genuinely non-Hermitian
    CMatrix B = harness::make_observable(json{{"kind", "random-hermitian"}}, 6, 1, "");
    CHECK(hermiticity_defect(B) <= 1e-12);
    // deterministic under seed
    CHECK(testkit::max_abs_diff(A, harness::make_observable(json{{"kind", "random"}}, 6, 1, "")) ==
          0.0);
}

TEST_CASE("sweep summaries are byte-identical across thread counts") {
    ExperimentConfig config;
    config.mode = "sweep";
    config.seed = 5;
    config.sweep = json{{"instances", 12},
                        {"dims", json::array({8, 16})},
                        {"ensemble", "gue"},
                        {"state", json{{"kind", "haar-pure"}}},
                        {"observable", json{{"kind", "random"}}},
                        {"split", json{{"d_S", 2}}},
                        {"n_samples", 120}};
    json serial = harness::run_sweep(config, 1);
    json parallel = harness::run_sweep(config, 4);
    CHECK(serial.dump() == parallel.dump());
    CHECK(serial["violation_count"].get<int>() == 0);
    CHECK(serial["records"].size() == 12);
    CHECK(serial["subsystem_groups"].size() == 2);
}

TEST_CASE("a single-instance sweep reduces to the plain theorem check") {
    ExperimentConfig config;
    config.mode = "sweep";
    config.seed = 9;
    config.sweep = json{{"instances", 1}, {"dims", json::array({8})}};
    json summary = harness::run_sweep(config, 1);
    REQUIRE(summary["records"].size() == 1);
    const json& rec = summary["records"][0];
    CHECK(rec["gap_pass"].get<bool>());
    CHECK(rec["sigma_sq"].get<double>() <= rec["bound_delta"].get<double>() + 1e-9);

    Hamiltonian ham = harness::make_hamiltonian(json{{"ensemble", "gue"}, {"dim", 8}},
                                                Rng::derive_key(9, 0, "hamiltonian"), "");
    DensityOperator rho0 = harness::make_state(json{{"kind", "haar-pure"}}, ham,
                                               Rng::derive_key(9, 0, "state"), "");
    CMatrix A = harness::make_observable(json{{"kind", "random"}}, 8,
                                         Rng::derive_key(9, 0, "observable"), "");
    CHECK(rec["sigma_sq"].get<double>() ==
          doctest::Approx(sigma_sq_exact(ham, rho0, A)).epsilon(1e-12));
}

TEST_CASE("universality mode with band measurements and a subspace state") {
    ExperimentConfig config;
    config.mode = "universality";
    config.hamiltonian = json{{"ensemble", "spaced-spectrum"}, {"dim", 6}};
    config.partition = json{{"band_edges", json::array({2.0})}};
    config.state = json{{"kind", "subspace-pure"}};
    config.measurements = json::array({json{{"kind", "band"}}});
    config.subspace_index = 0;
    config.seed = 21;
    config.n_samples = 200;
    harness::RunOutcome outcome = harness::run(config);
    const json& u = outcome.report["universality"];
    CHECK(u["epsilon"].get<double>() <= 1e-12);
    CHECK(u["empirical_avg"].get<double>() <= 1e-9);
    CHECK(u["bound_holds"].get<bool>());
    CHECK_FALSE(outcome.violation_found);
}

TEST_CASE("subsystem mode reports bound and estimate") {
    ExperimentConfig config;
    config.mode = "subsystem";
    config.hamiltonian = json{{"ensemble", "gue"}, {"dim", 8}};
    config.state = json{{"kind", "haar-pure"}};
    config.split = BipartiteSplit{2, 0};  // d_B inferred
    config.seed = 31;
    config.n_samples = 200;
    harness::RunOutcome outcome = harness::run(config);
    CHECK(outcome.report["d_B"].get<int>() == 4);
    if (outcome.report["gap_pass"].get<bool>()) {
        CHECK(outcome.report["estimate"].get<double>() <=
              outcome.report["bound"].get<double>() +
                  3.0 * outcome.report["stderr"].get<double>() + 1e-9);
        CHECK_FALSE(outcome.violation_found);
    }
}
