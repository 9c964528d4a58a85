// eqlab — CLI for equilibration analyses on finite-dimensional quantum systems.
//
// Exit codes: 0 all asserted inequalities hold, 2 a bound or gap check was
// violated, 1 error (bad config, bad input, internal failure).
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "eqlab/harness.hpp"

namespace {

using eqlab::harness::ExperimentConfig;
using eqlab::harness::RunOutcome;

struct CliOptions {
    std::string config_path;
    std::string hamiltonian_path;  // check-gaps shortcut
    std::string out_dir;
    std::string timeseries_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int k = 5;
    bool k_set = false;
    int threads = 1;
};

void print_table(const eqlab::io::json& j, const std::string& indent = "  ") {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            std::cout << indent << key << ":\n";
            print_table(value, indent + "  ");
        } else if (value.is_array()) {
            std::cout << indent << key << ": [" << value.size() << " entries]\n";
        } else {
            std::cout << indent << key << " = " << value.dump() << "\n";
        }
    }
}

void print_bound_chain(const eqlab::io::json& t1) {
    auto num = [&](const char* key) { return t1[key].get<double>(); };
    std::printf("  %-28s %.12g\n", "sigma_sq", num("sigma_sq"));
    std::printf("  %-28s %.12g\n", "Delta^2/(4 d_eff)", num("bound_delta"));
    std::printf("  %-28s %.12g\n", "norm^2/d_eff", num("bound_norm"));
    std::printf("  %-28s %.12g\n", "Delta^2 tr(omega^2)", num("reimann_purity_bound"));
    std::printf("  %-28s %.12g\n", "d_eff", num("d_eff"));
    std::printf("  %-28s %.12g\n", "Delta", num("delta"));
    std::printf("  %-28s %s\n", "tight", t1["tight"].get<bool>() ? "yes" : "no");
    std::printf("  %-28s %s\n", "exceeds purity bound",
                t1["exceeds_purity_bound"].get<bool>() ? "yes" : "no");
}

int run_mode(const std::string& mode, const CliOptions& options) {
    ExperimentConfig config;
    if (!options.config_path.empty()) {
        config = eqlab::harness::load_config_file(options.config_path);
        if (config.mode != mode)
            throw eqlab::ConfigError("config.mode '" + config.mode +
                                     "' does not match subcommand '" + mode + "'");
    } else {
        config.mode = mode;
    }
    if (options.seed_set) config.seed = options.seed;
    if (options.k_set) config.counterexample_k = options.k;
    if (!options.hamiltonian_path.empty())
        config.hamiltonian = eqlab::io::json{{"file", options.hamiltonian_path}};
    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        config.report_path =
            (std::filesystem::path(options.out_dir) / (mode + "-report.json")).string();
    }
    if (!options.timeseries_path.empty()) config.timeseries_path = options.timeseries_path;

    RunOutcome outcome = eqlab::harness::run(config, options.threads);

    std::cout << "mode: " << mode << "\n";
    if (outcome.report.contains("theorem1")) {
        print_bound_chain(outcome.report["theorem1"]);
        if (outcome.report.contains("sampled_sigma_sq")) {
            const auto& s = outcome.report["sampled_sigma_sq"];
            std::printf("  %-28s %.12g +/- %.12g\n", "sampled sigma_sq",
                        s["estimate"].get<double>(), s["stderr"].get<double>());
        }
    } else if (outcome.report.contains("gap_report")) {
        const auto& gr = outcome.report["gap_report"];
        std::cout << "  levels: " << gr["num_levels"] << "\n";
        std::cout << "  pass:   " << (gr["pass"].get<bool>() ? "yes" : "no") << "\n";
        for (const auto& v : gr["violations"]) {
            std::printf("  violation: (E%d - E%d) = (E%d - E%d): %.6g - %.6g = %.6g - %.6g\n",
                        v["k"].get<int>(), v["l"].get<int>(), v["m"].get<int>(),
                        v["n"].get<int>(), v["E_k"].get<double>(), v["E_l"].get<double>(),
                        v["E_m"].get<double>(), v["E_n"].get<double>());
        }
        std::cout << "  near misses: " << gr["near_misses"].size() << "\n";
    } else {
        print_table(outcome.report);
    }
    if (!config.report_path.empty())
        std::cout << "report written to " << config.report_path << "\n";

    return outcome.violation_found ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical certification of equilibration bounds for finite quantum systems"};
    app.require_subcommand(1);

    CliOptions options;
    const std::vector<std::string> modes = {"check-gaps", "theorem1",       "corollary",
                                            "subsystem",  "universality",   "counterexample",
                                            "sweep"};
    for (const auto& mode : modes) {
        CLI::App* sub = app.add_subcommand(mode);
        sub->add_option("--config", options.config_path, "experiment config (JSON)");
        sub->add_option("--seed", options.seed, "override the config seed")
            ->each([&](const std::string&) { options.seed_set = true; });
        sub->add_option("--out", options.out_dir, "directory for the JSON report");
        sub->add_option("--timeseries", options.timeseries_path, "CSV time-series output path");
        sub->add_option("--threads", options.threads, "worker threads (sweep mode)");
        if (mode == "counterexample")
            sub->add_option("--k", options.k, "bath dimension of the counterexample")
                ->each([&](const std::string&) { options.k_set = true; });
        if (mode == "check-gaps")
            sub->add_option("--hamiltonian", options.hamiltonian_path, "Hamiltonian (JSON)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& mode : modes)
            if (app.get_subcommand(mode)->parsed()) return run_mode(mode, options);
    } catch (const eqlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
