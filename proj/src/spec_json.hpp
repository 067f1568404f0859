#pragma once

#include <json.hpp>

#include "bioml/model_spec.hpp"

namespace bioml {

ModelSpec apply_overrides(ModelSpec spec, const nlohmann::json& overrides);
nlohmann::json spec_to_json(const ModelSpec& spec);

// Typed field access that reports problems as Config errors naming `where`.
template <typename T>
T json_get(const nlohmann::json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::Config, "invalid value for '" + where + "': " + value.dump());
  }
}

}  // namespace bioml
