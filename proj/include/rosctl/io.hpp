#pragma once

#include <string>

#include "json.hpp"

namespace rosctl::io {

using Json = nlohmann::ordered_json;

// Shortest decimal representation that round-trips to the same double.
std::string fmt(double x);

// Serializes JSON with doubles in shortest round-trip form (deterministic byte output).
std::string dump(const Json& j, int indent = 2);

}  // namespace rosctl::io
