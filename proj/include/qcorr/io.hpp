#pragma once

#include <string>

#include <json.hpp>

#include "qcorr/measures.hpp"

namespace qcorr {

using Json = nlohmann::json;

// State file format: {"dims": [...], "matrix": [[[re,im],...],...], "label"?}
// Pure states use "vector" instead of "matrix".  Writers emit 17 significant
// digits so a round trip is entrywise exact.
Json state_to_json(const DensityMatrix& rho, const std::string& label = "");
Json state_to_json(const PureState& psi, const std::string& label = "");
DensityMatrix density_from_json(const Json& j);
PureState pure_from_json(const Json& j);
bool json_is_pure_state(const Json& j);

// POVM file format: {"dim": d, "effects": [matrix,...]}
Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& j);

Json measure_report_to_json(const MeasureReport& rep, const std::string& certificate_file = "");

// OptConfig JSON block: any subset of {n_outcomes, restarts, max_iters,
// conv_tol, seed, mode, sweeps}; unknown keys are rejected.
OptConfig opt_config_from_json(const Json& j);
int sweeps_from_json(const Json& j, int fallback = 6);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

/// Structural validation against the subset of JSON Schema used by the
/// schemas/ directory (type, properties, required, items, enum).
/// Returns an empty string on success, else a description of the first error.
std::string validate_against_schema(const Json& value, const Json& schema);

std::string bound_direction_name(BoundDirection b);

}  // namespace qcorr
