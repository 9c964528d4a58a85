// io.hpp — JSON (de)serialization for matrices, states, Hamiltonians, POVMs
// and partitions, plus report serializers. Complex matrices are nested arrays
// of [re, im] pairs, row-major.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "eqlab/distinguish.hpp"
#include "eqlab/dynamics.hpp"
#include "eqlab/equilibration.hpp"
#include "eqlab/spectral.hpp"
#include "eqlab/universality.hpp"

namespace eqlab::io {

using json = nlohmann::ordered_json;

json matrix_to_json(const CMatrix& M);
CMatrix matrix_from_json(const json& j, const std::string& context);
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j, const std::string& context);

// Accepts {"matrix": <matrix>} (optionally "degeneracy_tol") or
// {"energies": [...], "eigenvectors": <matrix with eigenvector columns>}.
Hamiltonian hamiltonian_from_json(const json& j, const std::string& context);
json hamiltonian_to_json(const Hamiltonian& H);  // dense-matrix form

// Accepts {"vector": <vector>} or {"matrix": <matrix>}.
DensityOperator state_from_json(const json& j, const std::string& context);

// {"label": ..., "outcomes": [{"result": ..., "matrix": ...}]}
POVM povm_from_json(const json& j, const std::string& context);
json povm_to_json(const POVM& povm);

// {"band_edges": [...]} (needs H) or {"projectors": [...], "labels": [...]}.
SubspacePartition partition_from_json(const json& j, const Hamiltonian& H,
                                      const std::string& context);

json gap_report_to_json(const GapReport& report, const Hamiltonian& H);
json theorem1_to_json(const Theorem1Report& report);
json corollary_to_json(const CorollaryReport& report);
json universality_to_json(const UniversalityReport& report);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace eqlab::io
