#include "euclidlab/json_io.hpp"

#include "euclidlab/errors.hpp"

namespace euclidlab {

nlohmann::json to_json_value(const Integer& value) {
  if (mpz_fits_slong_p(value.get_mpz_t())) return value.get_si();
  return to_string(value);
}

Integer integer_from_json(const nlohmann::json& value) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return from_u64(value.get<std::uint64_t>());
    return Integer(value.get<long>());
  }
  if (value.is_string()) return parse_integer(value.get<std::string>());
  throw DomainError("expected an integer, got " + value.dump());
}

Natural natural_from_json(const nlohmann::json& value) {
  Integer v = integer_from_json(value);
  if (sgn(v) < 0) throw DomainError("expected a nonnegative integer, got " + value.dump());
  return v;
}

nlohmann::json to_json_value(const std::vector<Natural>& values) {
  auto out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(to_json_value(v));
  return out;
}

nlohmann::json to_json_value(const FactorMap& factors) {
  auto out = nlohmann::json::array();
  for (const auto& [p, e] : factors) {
    out.push_back({{"prime", to_json_value(p)}, {"exponent", e}});
  }
  return out;
}

}  // namespace euclidlab
