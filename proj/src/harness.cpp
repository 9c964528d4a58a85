#include "eqlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "eqlab/equilibration.hpp"
#include "eqlab/universality.hpp"

namespace eqlab::harness {

namespace {

namespace fs = std::filesystem;

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / p).string();
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    auto idx = static_cast<std::size_t>(q * static_cast<double>(values.size() - 1) + 0.5);
    return values[std::min(idx, values.size() - 1)];
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    int count = std::min(threads, n);
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
}

TimeAverageConvention convention_for(const ExperimentConfig& config, const Hamiltonian& H,
                                     std::uint64_t seed) {
    TimeAverageConvention conv = default_convention(H, seed, config.n_samples);
    if (config.t_max) conv.t_max = *config.t_max;
    return conv;
}

Complex trace_product(const CMatrix& A, const CMatrix& rho) {
    return A.cwiseProduct(rho.transpose()).sum();
}

void require_field(bool present, const std::string& field, const std::string& mode) {
    if (!present) throw ConfigError("config." + field + ": required for mode " + mode);
}

}  // namespace

ExperimentConfig parse_config(const io::json& j, const std::string& base_dir) {
    ExperimentConfig config;
    config.base_dir = base_dir;
    if (!j.contains("mode") || !j["mode"].is_string())
        throw ConfigError("config.mode: required string");
    config.mode = j["mode"].get<std::string>();
    static const std::vector<std::string> modes = {
        "check-gaps", "theorem1",       "corollary", "subsystem",
        "universality", "counterexample", "sweep"};
    if (std::find(modes.begin(), modes.end(), config.mode) == modes.end())
        throw ConfigError("config.mode: unknown mode '" + config.mode + "'");

    if (j.contains("hamiltonian")) config.hamiltonian = j["hamiltonian"];
    if (j.contains("state")) config.state = j["state"];
    if (j.contains("observable")) config.observable = j["observable"];
    if (j.contains("measurements")) config.measurements = j["measurements"];
    if (j.contains("partition")) config.partition = j["partition"];
    if (j.contains("sweep")) config.sweep = j["sweep"];
    if (j.contains("subspace_index")) config.subspace_index = j["subspace_index"].get<int>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("k")) config.counterexample_k = j["k"].get<int>();
    if (j.contains("split")) {
        const auto& js = j["split"];
        if (!js.contains("d_S")) throw ConfigError("config.split.d_S: required");
        BipartiteSplit split;
        split.d_s = js["d_S"].get<int>();
        split.d_b = js.value("d_B", 0);  // 0: inferred from the dimension
        config.split = split;
    }
    if (j.contains("convention")) {
        const auto& jc = j["convention"];
        if (jc.contains("t_max") && !jc["t_max"].is_null())
            config.t_max = jc["t_max"].get<double>();
        if (jc.contains("n_samples")) config.n_samples = jc["n_samples"].get<int>();
        if (config.n_samples < 1) throw ConfigError("config.convention.n_samples: must be >= 1");
    }
    if (j.contains("out")) {
        const auto& jo = j["out"];
        if (jo.contains("report")) config.report_path = jo["report"].get<std::string>();
        if (jo.contains("timeseries")) config.timeseries_path = jo["timeseries"].get<std::string>();
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    io::json j = io::load_json_file(path);
    return parse_config(j, fs::path(path).parent_path().string());
}

Hamiltonian make_hamiltonian(const io::json& descriptor, std::uint64_t seed,
                             const std::string& base_dir) {
    if (descriptor.is_null()) throw ConfigError("config.hamiltonian: missing");
    if (descriptor.contains("file")) {
        std::string path = resolve_path(descriptor["file"].get<std::string>(), base_dir);
        return io::hamiltonian_from_json(io::load_json_file(path), path);
    }
    if (descriptor.contains("ensemble")) {
        std::string kind = descriptor["ensemble"].get<std::string>();
        if (!descriptor.contains("dim"))
            throw ConfigError("config.hamiltonian.dim: required with 'ensemble'");
        int dim = descriptor["dim"].get<int>();
        if (kind == "gue") return random_hamiltonian(dim, Ensemble::gue, seed);
        if (kind == "spaced-spectrum")
            return random_hamiltonian(dim, Ensemble::spaced_spectrum, seed);
        throw ConfigError("config.hamiltonian.ensemble: unknown ensemble '" + kind + "'");
    }
    return io::hamiltonian_from_json(descriptor, "config.hamiltonian");
}

DensityOperator make_state(const io::json& descriptor, const Hamiltonian& H, std::uint64_t seed,
                           const std::string& base_dir) {
    if (descriptor.is_null()) throw ConfigError("config.state: missing");
    if (descriptor.contains("file")) {
        std::string path = resolve_path(descriptor["file"].get<std::string>(), base_dir);
        DensityOperator rho = io::state_from_json(io::load_json_file(path), path);
        if (rho.dim() != H.dim())
            throw ConfigError(path + ": state dimension " + std::to_string(rho.dim()) +
                              " does not match Hamiltonian dimension " + std::to_string(H.dim()));
        return rho;
    }
    if (descriptor.contains("vector") || descriptor.contains("matrix"))
        return io::state_from_json(descriptor, "config.state");
    std::string kind = descriptor.value("kind", "");
    Rng rng = Rng::keyed(seed, 0, "state");
    if (kind == "haar-pure") return DensityOperator::from_pure(haar_state(H.dim(), rng));
    if (kind == "eigenmix") {
        // random mixture of the level equilibrium states; commutes with H
        double total = 0.0;
        std::vector<double> weights;
        weights.reserve(H.levels().size());
        for (std::size_t n = 0; n < H.levels().size(); ++n) {
            weights.push_back(-std::log(1.0 - rng.uniform01()));
            total += weights.back();
        }
        CMatrix rho = CMatrix::Zero(H.dim(), H.dim());
        for (std::size_t n = 0; n < H.levels().size(); ++n)
            rho += (weights[n] / total / H.levels()[n].multiplicity) * H.levels()[n].projector;
        return DensityOperator::unchecked(std::move(rho));
    }
    if (kind == "rank-mixed") {
        int rank = std::clamp(descriptor.value("rank", 3), 2, H.dim());
        std::vector<double> weights;
        double total = 0.0;
        for (int i = 0; i < rank; ++i) {
            weights.push_back(-std::log(1.0 - rng.uniform01()));
            total += weights.back();
        }
        CMatrix rho = CMatrix::Zero(H.dim(), H.dim());
        for (int i = 0; i < rank; ++i) {
            CVector psi = haar_state(H.dim(), rng);
            rho += (weights[static_cast<std::size_t>(i)] / total) * (psi * psi.adjoint());
        }
        return DensityOperator::from_matrix(rho);
    }
    throw ConfigError("config.state.kind: expected haar-pure, eigenmix or rank-mixed");
}

CMatrix make_observable(const io::json& descriptor, int dim, std::uint64_t seed,
                        const std::string& base_dir) {
    if (descriptor.is_null()) throw ConfigError("config.observable: missing");
    if (descriptor.contains("file")) {
        std::string path = resolve_path(descriptor["file"].get<std::string>(), base_dir);
        io::json j = io::load_json_file(path);
        if (!j.contains("matrix")) throw ConfigError(path + ": expected 'matrix'");
        CMatrix A = io::matrix_from_json(j["matrix"], path);
        if (A.rows() != dim || A.cols() != dim)
            throw ConfigError(path + ": observable dimension mismatch");
        return A;
    }
    if (descriptor.contains("matrix"))
        return io::matrix_from_json(descriptor["matrix"], "config.observable.matrix");
    std::string kind = descriptor.value("kind", "");
    Rng rng = Rng::keyed(seed, 0, "observable");
    if (kind == "random") {
        CMatrix A(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) A(i, j) = rng.complex_gaussian();
        return A;
    }
    if (kind == "random-hermitian") return gue_matrix(dim, rng);
    throw ConfigError("config.observable.kind: expected random or random-hermitian");
}

MeasurementSet make_measurements(const io::json& descriptor, const std::string& base_dir) {
    if (descriptor.is_null() || !descriptor.is_array() || descriptor.empty())
        throw ConfigError("config.measurements: expected a non-empty array");
    MeasurementSet set;
    int index = 0;
    for (const auto& entry : descriptor) {
        std::string context = "config.measurements[" + std::to_string(index) + "]";
        POVM povm;
        if (entry.contains("file")) {
            std::string path = resolve_path(entry["file"].get<std::string>(), base_dir);
            povm = io::povm_from_json(io::load_json_file(path), path);
            context = path;
        } else {
            povm = io::povm_from_json(entry, context);
        }
        auto violations = validate_povm(povm);
        if (!violations.empty()) {
            std::string msg = context + ": invalid POVM:";
            for (const auto& v : violations)
                msg += " [" + v.what + " (" + format_double(v.magnitude) + ")]";
            throw ConfigError(msg);
        }
        set.measurements.push_back(std::move(povm));
        ++index;
    }
    return set;
}

CounterexampleInstance counterexample_instance(int k) {
    if (k < 1) throw BadDimension("counterexample_instance: k must be positive");
    const int d = 2 * k;
    CMatrix eye_k = CMatrix::Identity(k, k);
    CMatrix plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    std::vector<EnergyLevel> levels;
    levels.push_back({-1.0, tensor(minus, eye_k), k});
    levels.push_back({+1.0, tensor(plus, eye_k), k});
    Hamiltonian H(d, std::move(levels));

    CMatrix zero_proj = CMatrix::Zero(2, 2);
    zero_proj(0, 0) = 1.0;
    DensityOperator rho0 =
        DensityOperator::from_matrix(tensor(zero_proj, eye_k / static_cast<double>(k)));

    CMatrix sigma_z(2, 2);
    sigma_z << 1.0, 0.0, 0.0, -1.0;
    return {std::move(H), std::move(rho0), tensor(sigma_z, eye_k)};
}

namespace {

RunOutcome run_check_gaps(const ExperimentConfig& config) {
    Hamiltonian H = make_hamiltonian(config.hamiltonian, config.seed, config.base_dir);
    GapReport report = check_nondegenerate_gaps(H);
    RunOutcome outcome;
    outcome.report = io::json{{"mode", "check-gaps"},
                              {"dim", H.dim()},
                              {"gap_report", io::gap_report_to_json(report, H)}};
    outcome.violation_found = !report.pass;
    return outcome;
}

std::vector<std::vector<double>> expectation_series(const Hamiltonian& H,
                                                    const DensityOperator& rho0,
                                                    const CMatrix& A,
                                                    const TimeAverageConvention& conv) {
    Complex equilibrium = trace_product(A, dephase(H, rho0).matrix());
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(conv.n_samples));
    for (double t : sample_times(conv)) {
        Complex value = trace_product(A, evolve(H, rho0, t).matrix());
        rows.push_back({t, value.real(), value.imag(), std::norm(value - equilibrium)});
    }
    return rows;
}

RunOutcome run_theorem1(const ExperimentConfig& config) {
    Hamiltonian H = make_hamiltonian(config.hamiltonian, config.seed, config.base_dir);
    DensityOperator rho0 = make_state(config.state, H, config.seed, config.base_dir);
    require_field(!config.observable.is_null(), "observable", "theorem1");
    CMatrix A = make_observable(config.observable, H.dim(), config.seed, config.base_dir);

    Theorem1Report report = theorem1_report(H, rho0, A);
    TimeAverageConvention conv = convention_for(config, H, config.seed);
    MonteCarloEstimate sampled = sigma_sq_sampled(H, rho0, A, conv);

    RunOutcome outcome;
    outcome.report = io::json{{"mode", "theorem1"},
                              {"dim", H.dim()},
                              {"theorem1", io::theorem1_to_json(report)},
                              {"sampled_sigma_sq",
                               io::json{{"estimate", sampled.estimate},
                                        {"stderr", sampled.std_error},
                                        {"t_max", conv.t_max},
                                        {"n_samples", conv.n_samples}}}};
    outcome.violation_found = report.sigma_sq > report.bound_delta + 1e-9 ||
                              report.bound_delta > report.bound_norm + 1e-9;
    if (!config.timeseries_path.empty())
        write_csv(config.timeseries_path, {"t", "expectation_re", "expectation_im", "deviation_sq"},
                  expectation_series(H, rho0, A, conv));
    return outcome;
}

RunOutcome run_counterexample(const ExperimentConfig& config) {
    const int k = config.counterexample_k;
    CounterexampleInstance inst = counterexample_instance(k);
    Theorem1Report report = theorem1_report(inst.hamiltonian, inst.state, inst.observable);
    TimeAverageConvention conv = convention_for(config, inst.hamiltonian, config.seed);
    MonteCarloEstimate sampled =
        sigma_sq_sampled(inst.hamiltonian, inst.state, inst.observable, conv);

    RunOutcome outcome;
    outcome.report = io::json{{"mode", "counterexample"},
                              {"k", k},
                              {"dim", 2 * k},
                              {"theorem1", io::theorem1_to_json(report)},
                              {"sampled_sigma_sq",
                               io::json{{"estimate", sampled.estimate},
                                        {"stderr", sampled.std_error}}}};
    outcome.violation_found = report.sigma_sq > report.bound_delta + 1e-9;
    if (!config.timeseries_path.empty())
        write_csv(config.timeseries_path, {"t", "expectation_re", "expectation_im", "deviation_sq"},
                  expectation_series(inst.hamiltonian, inst.state, inst.observable, conv));
    return outcome;
}

RunOutcome run_corollary(const ExperimentConfig& config) {
    Hamiltonian H = make_hamiltonian(config.hamiltonian, config.seed, config.base_dir);
    DensityOperator rho0 = make_state(config.state, H, config.seed, config.base_dir);
    require_field(!config.measurements.is_null(), "measurements", "corollary");
    MeasurementSet set = make_measurements(config.measurements, config.base_dir);
    TimeAverageConvention conv = convention_for(config, H, config.seed);
    CorollaryReport report = corollary_report(set, H, rho0, conv);

    RunOutcome outcome;
    outcome.report = io::json{{"mode", "corollary"},
                              {"dim", H.dim()},
                              {"total_outcomes", set.total_outcomes()},
                              {"corollary", io::corollary_to_json(report)}};
    outcome.violation_found = !report.bound_holds;
    if (!config.timeseries_path.empty()) {
        DensityOperator omega = dephase(H, rho0);
        std::vector<std::vector<double>> rows;
        for (double t : sample_times(conv))
            rows.push_back({t, d_set(set, evolve(H, rho0, t), omega)});
        write_csv(config.timeseries_path, {"t", "set_distinguishability"}, rows);
    }
    return outcome;
}

RunOutcome run_subsystem(const ExperimentConfig& config) {
    Hamiltonian H = make_hamiltonian(config.hamiltonian, config.seed, config.base_dir);
    DensityOperator rho0 = make_state(config.state, H, config.seed, config.base_dir);
    require_field(config.split.has_value(), "split", "subsystem");
    BipartiteSplit split = *config.split;
    if (split.d_b == 0) split.d_b = H.dim() / std::max(split.d_s, 1);
    TimeAverageConvention conv = convention_for(config, H, config.seed);

    GapReport gaps = check_nondegenerate_gaps(H);
    MonteCarloEstimate est = avg_subsystem_distance(H, rho0, split, conv);
    RunOutcome outcome;
    io::json report{{"mode", "subsystem"},
                    {"dim", H.dim()},
                    {"d_S", split.d_s},
                    {"d_B", split.d_b},
                    {"gap_pass", gaps.pass},
                    {"estimate", est.estimate},
                    {"stderr", est.std_error},
                    {"d_eff", effective_dimension(H, rho0)}};
    if (gaps.pass) {
        double bound = subsystem_bound(H, rho0, split);
        report["bound"] = bound;
        outcome.violation_found = est.estimate > bound + 3.0 * est.std_error + 1e-9;
    } else {
        // no bound is asserted for gap-degenerate Hamiltonians
        report["bound"] = nullptr;
    }
    outcome.report = std::move(report);
    if (!config.timeseries_path.empty()) {
        CMatrix omega_s =
            partial_trace(dephase(H, rho0).matrix(), split.d_s, split.d_b, Keep::subsystem);
        std::vector<std::vector<double>> rows;
        for (double t : sample_times(conv)) {
            CMatrix rho_s = partial_trace(evolve(H, rho0, t).matrix(), split.d_s, split.d_b,
                                          Keep::subsystem);
            rows.push_back({t, 0.5 * trace_norm(rho_s - omega_s, 1e-8)});
        }
        write_csv(config.timeseries_path, {"t", "subsystem_trace_distance"}, rows);
    }
    return outcome;
}

RunOutcome run_universality(const ExperimentConfig& config) {
    Hamiltonian H = make_hamiltonian(config.hamiltonian, config.seed, config.base_dir);
    require_field(!config.partition.is_null(), "partition", "universality");
    SubspacePartition partition =
        io::partition_from_json(config.partition, H, "config.partition");
    const int k = config.subspace_index;
    if (k < 0 || k >= partition.size())
        throw ConfigError("config.subspace_index: out of range");

    DensityOperator rho0 = [&] {
        if (config.state.is_object() && config.state.value("kind", "") == "subspace-pure") {
            Rng rng = Rng::keyed(config.seed, 0, "state");
            CVector v = partition.projectors[static_cast<std::size_t>(k)] *
                        haar_state(H.dim(), rng);
            if (v.norm() < 1e-12)
                throw ConfigError("config.state: subspace projection vanished");
            return DensityOperator::from_pure(v.normalized());
        }
        return make_state(config.state, H, config.seed, config.base_dir);
    }();

    require_field(!config.measurements.is_null(), "measurements", "universality");
    MeasurementSet set = [&] {
        // {"kind": "band"} expands to the projective measurement of the partition
        if (config.measurements.is_array() && config.measurements.size() == 1 &&
            config.measurements[0].is_object() &&
            config.measurements[0].value("kind", "") == "band") {
            POVM band;
            band.label = "band";
            for (int b = 0; b < partition.size(); ++b)
                band.outcomes.push_back({partition.labels[static_cast<std::size_t>(b)],
                                         partition.projectors[static_cast<std::size_t>(b)]});
            return MeasurementSet{{band}};
        }
        return make_measurements(config.measurements, config.base_dir);
    }();

    TimeAverageConvention conv = convention_for(config, H, config.seed);
    UniversalityReport report = universality_report(set, H, rho0, partition, k, conv);

    RunOutcome outcome;
    outcome.report = io::json{{"mode", "universality"},
                              {"dim", H.dim()},
                              {"subspace_index", k},
                              {"subspace_label", partition.labels[static_cast<std::size_t>(k)]},
                              {"total_outcomes", set.total_outcomes()},
                              {"universality", io::universality_to_json(report)}};
    outcome.violation_found = !report.bound_holds;
    if (!config.timeseries_path.empty()) {
        std::vector<std::vector<double>> rows;
        DensityOperator omega_k = equilibrium_state(partition, k);
        for (double t : sample_times(conv))
            rows.push_back({t, d_set(set, evolve(H, rho0, t), omega_k)});
        write_csv(config.timeseries_path, {"t", "set_distinguishability"}, rows);
    }
    return outcome;
}

struct SweepInstance {
    io::json record;
    bool violation = false;
    bool gap_pass = false;
    double theorem_ratio = 0.0;
    double d_eff = 0.0;
    int d_b = 0;
    double subsystem_estimate = 0.0;
    double subsystem_ratio = 0.0;
    bool has_subsystem = false;
};

}  // namespace

io::json run_sweep(const ExperimentConfig& config, int threads) {
    const io::json& spec = config.sweep;
    if (spec.is_null()) throw ConfigError("config.sweep: required for mode sweep");
    if (!spec.contains("instances")) throw ConfigError("config.sweep.instances: required");
    const int instances = spec["instances"].get<int>();
    if (instances < 1) throw ConfigError("config.sweep.instances: must be >= 1");
    if (!spec.contains("dims") || !spec["dims"].is_array() || spec["dims"].empty())
        throw ConfigError("config.sweep.dims: expected a non-empty array");
    std::vector<int> dims;
    for (const auto& d : spec["dims"]) dims.push_back(d.get<int>());
    const std::string ensemble_name = spec.value("ensemble", "gue");
    if (ensemble_name != "gue" && ensemble_name != "spaced-spectrum")
        throw ConfigError("config.sweep.ensemble: unknown ensemble '" + ensemble_name + "'");

    io::json state_desc = spec.contains("state") ? spec["state"]
                                                 : io::json{{"kind", "haar-pure"}};
    io::json observable_desc =
        spec.contains("observable") ? spec["observable"] : io::json{{"kind", "random"}};
    std::optional<int> split_ds;
    if (spec.contains("split")) split_ds = spec["split"]["d_S"].get<int>();
    const int n_samples = spec.value("n_samples", config.n_samples);

    std::vector<SweepInstance> results(static_cast<std::size_t>(instances));
    parallel_for(instances, threads, [&](int i) {
        const int dim = dims[static_cast<std::size_t>(i) % dims.size()];
        Hamiltonian H = make_hamiltonian(io::json{{"ensemble", ensemble_name}, {"dim", dim}},
                                         Rng::derive_key(config.seed, static_cast<std::uint64_t>(i),
                                                         "hamiltonian"),
                                         config.base_dir);
        DensityOperator rho0 = make_state(
            state_desc, H, Rng::derive_key(config.seed, static_cast<std::uint64_t>(i), "state"),
            config.base_dir);
        CMatrix A = make_observable(
            observable_desc, dim,
            Rng::derive_key(config.seed, static_cast<std::uint64_t>(i), "observable"),
            config.base_dir);

        SweepInstance& inst = results[static_cast<std::size_t>(i)];
        GapReport gaps = check_nondegenerate_gaps(H);
        inst.gap_pass = gaps.pass;
        inst.d_eff = effective_dimension(H, rho0);
        io::json record{{"index", i}, {"dim", dim}, {"gap_pass", gaps.pass},
                        {"d_eff", inst.d_eff}};

        if (gaps.pass) {
            double sigma_sq = sigma_sq_exact(H, rho0, A);
            double delta_a = delta(A);
            double norm_a = operator_norm(A);
            double bound_delta = delta_a * delta_a / (4.0 * inst.d_eff);
            double bound_norm = norm_a * norm_a / inst.d_eff;
            bool ok = sigma_sq <= bound_delta + 1e-9 && bound_delta <= bound_norm + 1e-9;
            inst.theorem_ratio = (bound_delta > 0.0) ? sigma_sq / bound_delta : 0.0;
            inst.violation = !ok;
            record["sigma_sq"] = sigma_sq;
            record["bound_delta"] = bound_delta;
            record["bound_norm"] = bound_norm;
            record["theorem_ratio"] = inst.theorem_ratio;
            record["theorem_ok"] = ok;
        }

        if (split_ds && gaps.pass) {
            BipartiteSplit split{*split_ds, dim / *split_ds};
            TimeAverageConvention conv = default_convention(
                H, Rng::derive_key(config.seed, static_cast<std::uint64_t>(i), "times"),
                n_samples);
            MonteCarloEstimate est = avg_subsystem_distance(H, rho0, split, conv);
            double bound = subsystem_bound(H, rho0, split);
            bool ok = est.estimate <= bound + 3.0 * est.std_error + 1e-9;
            inst.has_subsystem = true;
            inst.d_b = split.d_b;
            inst.subsystem_estimate = est.estimate;
            inst.subsystem_ratio = (bound > 0.0) ? est.estimate / bound : 0.0;
            inst.violation = inst.violation || !ok;
            record["subsystem"] = io::json{{"d_B", split.d_b},
                                           {"bound", bound},
                                           {"estimate", est.estimate},
                                           {"stderr", est.std_error},
                                           {"ratio", inst.subsystem_ratio},
                                           {"scaled_distance",
                                            est.estimate * std::sqrt(inst.d_eff)},
                                           {"ok", ok}};
        }
        inst.record = std::move(record);
    });

    io::json records = io::json::array();
    int violation_count = 0;
    double max_ratio = 0.0;
    std::vector<int> group_dbs;
    for (const auto& inst : results) {
        records.push_back(inst.record);
        if (inst.violation) ++violation_count;
        if (inst.gap_pass) max_ratio = std::max(max_ratio, inst.theorem_ratio);
        if (inst.has_subsystem &&
            std::find(group_dbs.begin(), group_dbs.end(), inst.d_b) == group_dbs.end())
            group_dbs.push_back(inst.d_b);
    }
    std::sort(group_dbs.begin(), group_dbs.end());

    io::json groups = io::json::array();
    for (int d_b : group_dbs) {
        std::vector<double> ratios, estimates, scaled;
        for (const auto& inst : results) {
            if (!inst.has_subsystem || inst.d_b != d_b) continue;
            ratios.push_back(inst.subsystem_ratio);
            estimates.push_back(inst.subsystem_estimate);
            scaled.push_back(inst.subsystem_estimate * std::sqrt(inst.d_eff));
        }
        groups.push_back(io::json{{"d_B", d_b},
                                  {"count", ratios.size()},
                                  {"median_ratio", median(ratios)},
                                  {"median_estimate", median(estimates)},
                                  {"scaled_distance_q25", quantile(scaled, 0.25)},
                                  {"scaled_distance_q50", quantile(scaled, 0.50)},
                                  {"scaled_distance_q75", quantile(scaled, 0.75)}});
    }

    return io::json{{"mode", "sweep"},
                    {"instances", instances},
                    {"seed", config.seed},
                    {"violation_count", violation_count},
                    {"max_theorem_ratio", max_ratio},
                    {"subsystem_groups", std::move(groups)},
                    {"records", std::move(records)}};
}

RunOutcome run(const ExperimentConfig& config, int threads) {
    RunOutcome outcome;
    if (config.mode == "check-gaps") outcome = run_check_gaps(config);
    else if (config.mode == "theorem1") outcome = run_theorem1(config);
    else if (config.mode == "counterexample") outcome = run_counterexample(config);
    else if (config.mode == "corollary") outcome = run_corollary(config);
    else if (config.mode == "subsystem") outcome = run_subsystem(config);
    else if (config.mode == "universality") outcome = run_universality(config);
    else if (config.mode == "sweep") {
        io::json summary = run_sweep(config, threads);
        outcome.violation_found = summary["violation_count"].get<int>() > 0;
        outcome.report = std::move(summary);
    } else {
        throw ConfigError("config.mode: unknown mode '" + config.mode + "'");
    }
    if (!config.report_path.empty()) io::write_json_file(config.report_path, outcome.report);
    return outcome;
}

}  // namespace eqlab::harness
