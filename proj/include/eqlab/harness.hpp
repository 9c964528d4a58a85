// harness.hpp — config-driven experiment runner behind the eqlab CLI:
// single-instance analyses, the degenerate-Hamiltonian counterexample, and
// seeded ensemble sweeps with order-independent parallel execution.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/io.hpp"
#include "eqlab/subsystem.hpp"

namespace eqlab::harness {

struct ExperimentConfig {
    std::string mode;  // check-gaps | theorem1 | corollary | subsystem |
                       // universality | counterexample | sweep
    io::json hamiltonian;   // {"file": ...} or {"ensemble": ..., "dim": ...}
    io::json state;         // {"file": ...} or {"kind": ...}
    io::json observable;    // {"file": ...} or {"kind": ...}
    io::json measurements;  // array of POVM descriptors ({"file": ...} or inline)
    io::json partition;     // partition descriptor
    io::json sweep;         // sweep descriptor
    int subspace_index = 0;
    std::optional<BipartiteSplit> split;
    int n_samples = 2000;
    std::optional<double> t_max;  // absent: 1e3 / min level gap
    std::uint64_t seed = 1;
    int counterexample_k = 5;
    std::string report_path;      // empty: no file written
    std::string timeseries_path;  // empty: no CSV written
    std::string base_dir;         // directory for resolving relative file refs
};

ExperimentConfig parse_config(const io::json& j, const std::string& base_dir);
ExperimentConfig load_config_file(const std::string& path);

struct RunOutcome {
    io::json report;
    bool violation_found = false;  // an asserted inequality failed
};

// Dispatches on config.mode, writes report/CSV files when paths are set.
RunOutcome run(const ExperimentConfig& config, int threads = 1);

// Ensemble sweep; instances keyed by (seed, index) so results are identical
// for any thread count. Returns the summary (also reachable via run()).
io::json run_sweep(const ExperimentConfig& config, int threads);

// Input materialization, shared with tests.
Hamiltonian make_hamiltonian(const io::json& descriptor, std::uint64_t seed,
                             const std::string& base_dir);
DensityOperator make_state(const io::json& descriptor, const Hamiltonian& H, std::uint64_t seed,
                           const std::string& base_dir);
CMatrix make_observable(const io::json& descriptor, int dim, std::uint64_t seed,
                        const std::string& base_dir);
MeasurementSet make_measurements(const io::json& descriptor, const std::string& base_dir);

// The qubit-times-bath instance with a degenerate Hamiltonian on which the
// purity-based bound fails while the d_eff bound stays tight: H = sigma_x (x) I_k,
// rho0 = |0><0| (x) I/k, A = sigma_z (x) I_k.
struct CounterexampleInstance {
    Hamiltonian hamiltonian;
    DensityOperator state;
    CMatrix observable;
};
CounterexampleInstance counterexample_instance(int k);

}  // namespace eqlab::harness
