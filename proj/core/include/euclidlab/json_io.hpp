#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "euclidlab/factor.hpp"
#include "euclidlab/natural.hpp"

namespace euclidlab {

// Integers that fit in a signed 64-bit word are written as JSON numbers, wider
// ones as decimal strings. Readers accept either form.
nlohmann::json to_json_value(const Integer& value);
Integer integer_from_json(const nlohmann::json& value);
Natural natural_from_json(const nlohmann::json& value);

nlohmann::json to_json_value(const std::vector<Natural>& values);

/// [{"prime": p, "exponent": e}, ...] in ascending prime order.
nlohmann::json to_json_value(const FactorMap& factors);

}  // namespace euclidlab
