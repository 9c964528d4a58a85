#include "eqlab/io.hpp"

#include <algorithm>
#include <fstream>

namespace eqlab::io {

namespace {

Complex entry_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(context + ": expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json entry_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json matrix_to_json(const CMatrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(entry_to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) throw ConfigError(context + ": expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty())
        throw ConfigError(context + ": expected rows to be arrays of [re, im] pairs");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
            throw ConfigError(context + ": row " + std::to_string(r) + " has inconsistent length");
        for (Eigen::Index c = 0; c < cols; ++c)
            M(r, c) = entry_from_json(j[r][c], context + "[" + std::to_string(r) + "][" +
                                                   std::to_string(c) + "]");
    }
    if (!is_finite(M)) throw ConfigError(context + ": non-finite entries");
    return M;
}

json vector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(entry_to_json(v(i)));
    return out;
}

CVector vector_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) throw ConfigError(context + ": expected a non-empty array");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = entry_from_json(j[static_cast<std::size_t>(i)],
                               context + "[" + std::to_string(i) + "]");
    return v;
}

Hamiltonian hamiltonian_from_json(const json& j, const std::string& context) {
    if (j.contains("matrix")) {
        CMatrix M = matrix_from_json(j["matrix"], context + ".matrix");
        std::optional<double> tol;
        if (j.contains("degeneracy_tol")) tol = j["degeneracy_tol"].get<double>();
        try {
            return build_hamiltonian(M, tol);
        } catch (const NotHermitian& e) {
            throw ConfigError(context + ".matrix: " + e.what());
        }
    }
    if (j.contains("energies") && j.contains("eigenvectors")) {
        const json& je = j["energies"];
        if (!je.is_array() || je.empty())
            throw ConfigError(context + ".energies: expected a non-empty array");
        std::vector<double> energies;
        for (const auto& e : je) {
            if (!e.is_number()) throw ConfigError(context + ".energies: expected numbers");
            energies.push_back(e.get<double>());
        }
        if (!std::is_sorted(energies.begin(), energies.end()))
            throw ConfigError(context + ".energies: must be ascending");
        CMatrix V = matrix_from_json(j["eigenvectors"], context + ".eigenvectors");
        const int d = static_cast<int>(energies.size());
        if (V.rows() != d || V.cols() != d)
            throw ConfigError(context + ".eigenvectors: expected a " + std::to_string(d) + "x" +
                              std::to_string(d) + " matrix of eigenvector columns");

        double range = energies.back() - energies.front();
        double scale = std::max(std::abs(energies.front()), std::abs(energies.back()));
        double tol = j.value("degeneracy_tol", 1e-8 * range + 1e-14 * (1.0 + scale));
        std::vector<EnergyLevel> levels;
        int start = 0;
        for (int i = 1; i <= d; ++i) {
            if (i < d && energies[static_cast<std::size_t>(i)] -
                                 energies[static_cast<std::size_t>(i - 1)] <=
                             tol)
                continue;
            int len = i - start;
            CMatrix cols = V.middleCols(start, len);
            double energy = 0.0;
            for (int s = start; s < i; ++s) energy += energies[static_cast<std::size_t>(s)];
            levels.push_back({energy / len, cols * cols.adjoint(), len});
            start = i;
        }
        Hamiltonian H(d, std::move(levels));
        auto defects = H.validate();
        if (!defects.empty())
            throw ConfigError(context + ".eigenvectors: " + defects.front());
        return H;
    }
    throw ConfigError(context + ": expected 'matrix' or 'energies'+'eigenvectors'");
}

json hamiltonian_to_json(const Hamiltonian& H) {
    return json{{"matrix", matrix_to_json(H.matrix())}};
}

DensityOperator state_from_json(const json& j, const std::string& context) {
    try {
        if (j.contains("vector"))
            return DensityOperator::from_pure(vector_from_json(j["vector"], context + ".vector"));
        if (j.contains("matrix"))
            return DensityOperator::from_matrix(matrix_from_json(j["matrix"], context + ".matrix"));
    } catch (const InvalidState& e) {
        throw ConfigError(context + ": " + e.what());
    }
    throw ConfigError(context + ": expected 'vector' or 'matrix'");
}

POVM povm_from_json(const json& j, const std::string& context) {
    POVM povm;
    povm.label = j.value("label", "povm");
    if (!j.contains("outcomes") || !j["outcomes"].is_array() || j["outcomes"].empty())
        throw ConfigError(context + ".outcomes: expected a non-empty array");
    int index = 0;
    for (const auto& o : j["outcomes"]) {
        std::string octx = context + ".outcomes[" + std::to_string(index) + "]";
        if (!o.contains("matrix")) throw ConfigError(octx + ": missing 'matrix'");
        povm.outcomes.push_back({o.value("result", std::to_string(index)),
                                 matrix_from_json(o["matrix"], octx + ".matrix")});
        ++index;
    }
    return povm;
}

json povm_to_json(const POVM& povm) {
    json outcomes = json::array();
    for (const auto& o : povm.outcomes)
        outcomes.push_back(json{{"result", o.result}, {"matrix", matrix_to_json(o.op)}});
    return json{{"label", povm.label}, {"outcomes", std::move(outcomes)}};
}

SubspacePartition partition_from_json(const json& j, const Hamiltonian& H,
                                      const std::string& context) {
    if (j.contains("band_edges")) {
        const json& je = j["band_edges"];
        if (!je.is_array()) throw ConfigError(context + ".band_edges: expected an array");
        std::vector<double> edges;
        for (const auto& e : je) edges.push_back(e.get<double>());
        return microcanonical_partition(H, edges);
    }
    if (j.contains("projectors")) {
        SubspacePartition partition;
        int index = 0;
        for (const auto& p : j["projectors"]) {
            partition.projectors.push_back(matrix_from_json(
                p, context + ".projectors[" + std::to_string(index) + "]"));
            partition.labels.push_back("subspace" + std::to_string(index));
            ++index;
        }
        if (j.contains("labels")) {
            const json& jl = j["labels"];
            if (!jl.is_array() || jl.size() != partition.projectors.size())
                throw ConfigError(context + ".labels: length mismatch");
            for (std::size_t i = 0; i < jl.size(); ++i) partition.labels[i] = jl[i].get<std::string>();
        }
        auto violations = validate_partition(H, partition);
        if (!violations.empty())
            throw ConfigError(context + ".projectors: invalid partition: " +
                              violations.front().what);
        return partition;
    }
    throw ConfigError(context + ": expected 'band_edges' or 'projectors'");
}

json gap_report_to_json(const GapReport& report, const Hamiltonian& H) {
    auto quad = [&](const GapViolation& v) {
        return json{{"k", v.k},
                    {"l", v.l},
                    {"m", v.m},
                    {"n", v.n},
                    {"E_k", H.level(v.k).energy},
                    {"E_l", H.level(v.l).energy},
                    {"E_m", H.level(v.m).energy},
                    {"E_n", H.level(v.n).energy},
                    {"mismatch", v.mismatch}};
    };
    json violations = json::array();
    for (const auto& v : report.violations) violations.push_back(quad(v));
    json near = json::array();
    for (const auto& v : report.near_misses) near.push_back(quad(v));
    return json{{"pass", report.pass},
                {"tolerance", report.tolerance},
                {"num_levels", H.num_levels()},
                {"violations", std::move(violations)},
                {"near_misses", std::move(near)}};
}

json theorem1_to_json(const Theorem1Report& report) {
    return json{{"sigma_sq", report.sigma_sq},
                {"bound_delta", report.bound_delta},
                {"bound_norm", report.bound_norm},
                {"reimann_purity_bound", report.reimann_purity_bound},
                {"d_eff", report.d_eff},
                {"delta", report.delta_a},
                {"operator_norm", report.operator_norm_a},
                {"purity_omega", report.purity_omega},
                {"tight", report.tight},
                {"exceeds_purity_bound", report.exceeds_purity_bound}};
}

json corollary_to_json(const CorollaryReport& report) {
    return json{{"bound_weighted", report.bound_weighted},
                {"bound_count", report.bound_count},
                {"empirical_avg", report.empirical_avg},
                {"stderr", report.std_error},
                {"d_eff", report.d_eff},
                {"bound_holds", report.bound_holds}};
}

json universality_to_json(const UniversalityReport& report) {
    return json{{"epsilon", report.epsilon},
                {"bound", report.bound},
                {"empirical_avg", report.empirical_avg},
                {"stderr", report.std_error},
                {"d_eff", report.d_eff},
                {"omega_k", matrix_to_json(report.omega_k.matrix())},
                {"bound_holds", report.bound_holds}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace eqlab::io
