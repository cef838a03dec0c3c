#pragma once

#include <json.hpp>
#include <string>

#include "polyosc/transition.hpp"
#include "polyosc/tree.hpp"

namespace polyosc {

/// Tree as nested objects: {"leaf": i} | {"left": ..., "right": ...}.
nlohmann::json tree_to_json(const Tree& t);
Tree tree_from_json(const nlohmann::json& j);

/// Compact state labels used as CSV headers: "n=0;1;2", "nr=1|q=0;1".
std::string state_label(const CartesianState& s);
std::string state_label(const HypersphericalState& s);

/// CSV with '#' metadata lines, one header row of column-state labels and
/// one row-state label per line; all values at 17 significant digits.
std::string matrix_to_csv(const TransitionMatrix& W, const Tree& t,
                          const ModelParams& p);

/// Same content as structured JSON (tree DSL, parameters, state tuples,
/// row-major value array).
nlohmann::json matrix_to_json(const TransitionMatrix& W, const Tree& t,
                              const ModelParams& p);

/// printf %.17g formatting used for every emitted number.
std::string format17(double v);

}  // namespace polyosc
