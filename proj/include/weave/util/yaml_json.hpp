#pragma once

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

namespace weave {

/// Converts a YAML node to JSON. Unquoted scalars are typed the way YAML 1.2
/// core schema would type them (null, booleans, integers, floats); quoted
/// scalars are always strings.
nlohmann::json yaml_to_json(const YAML::Node& node);

/// True when the scalar was written with quotes (or as a block scalar).
bool is_quoted_scalar(const YAML::Node& node);

}  // namespace weave
