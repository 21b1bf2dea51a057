#pragma once

#include <optional>
#include <span>
#include <vector>

#include "euclidlab/natural.hpp"

namespace euclidlab {

/// base^exp mod m for m >= 1 (exp = 0 gives 1 mod m).
Natural mod_pow(const Natural& base, const Natural& exp, const Natural& m);

/// Carmichael's function lambda(m), the exponent of (Z/mZ)^*.
Natural carmichael_lambda(const Natural& m);

/// ord_m(a): the least k >= 1 with a^k = 1 (mod m). Requires m >= 2 and
/// gcd(a, m) = 1, otherwise throws DomainError.
Natural multiplicative_order(const Natural& a, const Natural& m);

/// The least g >= 2 of order p - 1 modulo the odd prime p.
Natural primitive_root(const Natural& p);

struct Congruence {
  Natural residue;
  Natural modulus;

  friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// Solves x = r_i (mod m_i) for pairwise coprime moduli. The empty system
/// yields (0, 1). Throws DomainError on non-coprime moduli, a modulus of 0, or
/// a residue outside [0, m_i).
Congruence crt_combine(std::span<const Congruence> system);

/// The least prime g <= search_bound that is a primitive root modulo every q
/// in qs (distinct odd primes), or nullopt.
std::optional<Natural> common_primitive_root_prime(std::span<const Natural> qs,
                                                   const Natural& search_bound);

/// True iff g generates (Z/pZ)^* for the odd prime p, given the prime factors
/// of p - 1.
bool is_primitive_root(const Natural& g, const Natural& p,
                       const std::vector<Natural>& prime_factors_of_p_minus_1);

}  // namespace euclidlab
