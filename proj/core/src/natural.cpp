#include "euclidlab/natural.hpp"

#include <cctype>

#include "euclidlab/errors.hpp"

namespace euclidlab {

Integer parse_integer(std::string_view text) {
  std::string s(text);
  std::size_t start = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) start = 1;
  if (start == s.size()) throw DomainError("not an integer: '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw DomainError("not an integer: '" + s + "'");
    }
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

Natural parse_natural(std::string_view text) {
  Integer v = parse_integer(text);
  if (sgn(v) < 0) throw DomainError("expected a nonnegative integer, got " + std::string(text));
  return v;
}

std::string to_string(const Integer& value) { return value.get_str(10); }

std::uint64_t to_u64(const Integer& value) {
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

Natural from_u64(std::uint64_t value) {
  Natural out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
  return out;
}

}  // namespace euclidlab
