#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "gaussflow/surface.hpp"

namespace gaussflow {

using StateVariant = std::variant<GraphState, ParametricState>;

nlohmann::json state_to_json(const GraphState& state);
nlohmann::json state_to_json(const ParametricState& state);
StateVariant state_from_json(const nlohmann::json& j);

void save_state(const StateVariant& state, const std::string& path);
StateVariant load_state(const std::string& path);

}  // namespace gaussflow
