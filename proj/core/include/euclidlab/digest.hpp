#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace euclidlab {

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Digest of the canonical serialization of a JSON value. Object keys are
/// sorted by nlohmann::json, so equal documents hash equally.
std::string canonical_digest(const nlohmann::json& value);

}  // namespace euclidlab
