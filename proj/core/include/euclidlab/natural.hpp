#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace euclidlab {

// Exact integers. Natural is used where the value is nonnegative by contract,
// Integer where a sign can occur (b in the Pillai equation, targets P_I - eps).
using Natural = mpz_class;
using Integer = mpz_class;

/// Parses a decimal integer (optional leading '+' or '-'); throws DomainError.
Integer parse_integer(std::string_view text);

/// Parses a nonnegative decimal integer; throws DomainError.
Natural parse_natural(std::string_view text);

std::string to_string(const Integer& value);

inline bool fits_u64(const Integer& value) {
  return sgn(value) >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 64;
}

/// Precondition: fits_u64(value).
std::uint64_t to_u64(const Integer& value);

Natural from_u64(std::uint64_t value);

inline unsigned bit_length(const Integer& value) {
  return sgn(value) == 0 ? 0u : static_cast<unsigned>(mpz_sizeinbase(value.get_mpz_t(), 2));
}

inline Natural pow(const Natural& base, unsigned long exp) {
  Natural out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline bool divides(const Integer& d, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

}  // namespace euclidlab
