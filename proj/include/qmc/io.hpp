#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmc/classical.hpp"
#include "qmc/families.hpp"
#include "qmc/linalg.hpp"
#include "qmc/markov.hpp"
#include "qmc/optimizer.hpp"

namespace qmc {

using json = nlohmann::json;

// A state file carries "dims" and exactly one of "matrix" (row-major [re, im] pairs) or
// "vector" (amplitudes as [re, im] pairs).
struct LoadedState {
  TripartiteState state;
  std::optional<PureState> pure;
};

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& field);

json matrix_to_json(const ComplexMatrix& m);  // {"rows", "cols", "entries"}
ComplexMatrix matrix_from_json(const json& j, const std::string& field);

json state_to_json(const TripartiteState& rho);
json state_to_json(const PureState& psi);
LoadedState state_from_json(const json& j);

json classical_to_json(const ClassicalJoint& p);  // {"shape": [nx, ny, nz], "table": [...]}
ClassicalJoint classical_from_json(const json& j);

json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const json& j);

json opt_result_to_json(const OptResult& r);

// {"family": "psi-x", "x": ...} | {"family": "zeta-d", "d": ...} |
// {"family": "cq", "probs": [...], "states": [[[re, im], ...], ...]}
FamilyPoint family_from_json(const json& j);
json family_to_json(const FamilyPoint& p);  // the state file of the point

}  // namespace qmc
