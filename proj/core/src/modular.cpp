#include "euclidlab/modular.hpp"

#include <set>

#include "euclidlab/errors.hpp"
#include "euclidlab/factor.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"

namespace euclidlab {

Natural mod_pow(const Natural& base, const Natural& exp, const Natural& m) {
  if (m < 1) throw DomainError("mod_pow: modulus must be >= 1");
  if (sgn(exp) < 0) throw DomainError("mod_pow: negative exponent");
  Natural out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return out;
}

Natural carmichael_lambda(const Natural& m) {
  if (m < 1) throw DomainError("carmichael_lambda: m must be >= 1");
  Natural out = 1;
  for (const auto& [p, e] : factorize(m)) {
    Natural part;
    if (p == 2) {
      part = e == 1 ? Natural(1) : e == 2 ? Natural(2) : pow(Natural(2), e - 2);
    } else {
      part = pow(p, e - 1) * (p - 1);
    }
    mpz_lcm(out.get_mpz_t(), out.get_mpz_t(), part.get_mpz_t());
  }
  return out;
}

Natural multiplicative_order(const Natural& a, const Natural& m) {
  if (m < 2) throw DomainError("multiplicative_order: modulus must be >= 2");
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (g != 1) {
    throw DomainError("multiplicative_order: gcd(" + to_string(a) + ", " + to_string(m) +
                      ") = " + to_string(g) + " != 1");
  }
  Natural order = carmichael_lambda(m);
  for (const auto& [q, e] : factorize(order)) {
    for (std::uint32_t i = 0; i < e; ++i) {
      const Natural candidate = order / q;
      if (mod_pow(a, candidate, m) != 1) break;
      order = candidate;
    }
  }
  return order;
}

bool is_primitive_root(const Natural& g, const Natural& p,
                       const std::vector<Natural>& prime_factors_of_p_minus_1) {
  if (divides(p, g)) return false;
  const Natural phi = p - 1;
  for (const Natural& q : prime_factors_of_p_minus_1) {
    if (mod_pow(g, phi / q, p) == 1) return false;
  }
  return true;
}

Natural primitive_root(const Natural& p) {
  if (p == 2 || !is_prime(p)) {
    throw DomainError("primitive_root: expected an odd prime, got " + to_string(p));
  }
  const std::vector<Natural> qs = factorize(p - 1).primes();
  for (Natural g = 2;; ++g) {
    if (is_primitive_root(g, p, qs)) return g;
  }
}

Congruence crt_combine(std::span<const Congruence> system) {
  Congruence acc{Natural(0), Natural(1)};
  for (const Congruence& c : system) {
    if (c.modulus < 1) throw DomainError("crt_combine: modulus must be >= 1");
    if (sgn(c.residue) < 0 || c.residue >= c.modulus) {
      throw DomainError("crt_combine: residue " + to_string(c.residue) + " outside [0, " +
                        to_string(c.modulus) + ")");
    }
    Natural g;
    mpz_gcd(g.get_mpz_t(), acc.modulus.get_mpz_t(), c.modulus.get_mpz_t());
    if (g != 1) {
      throw DomainError("crt_combine: moduli are not pairwise coprime (gcd " + to_string(g) + ")");
    }
    // x = acc.residue + acc.modulus * t with t = (r - acc.residue) * acc.modulus^-1 (mod m).
    Natural inv;
    mpz_invert(inv.get_mpz_t(), acc.modulus.get_mpz_t(), c.modulus.get_mpz_t());
    Natural t = (c.residue - acc.residue) * inv;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), c.modulus.get_mpz_t());
    acc.residue += acc.modulus * t;
    acc.modulus *= c.modulus;
  }
  return acc;
}

std::optional<Natural> common_primitive_root_prime(std::span<const Natural> qs,
                                                   const Natural& search_bound) {
  std::set<Natural> seen;
  std::vector<std::vector<Natural>> phi_factors;
  for (const Natural& q : qs) {
    if (q == 2 || !is_prime(q)) {
      throw DomainError("common_primitive_root_prime: " + to_string(q) + " is not an odd prime");
    }
    if (!seen.insert(q).second) {
      throw DomainError("common_primitive_root_prime: duplicate prime " + to_string(q));
    }
    phi_factors.push_back(factorize(q - 1).primes());
  }
  if (!fits_u64(search_bound)) throw DomainError("common_primitive_root_prime: bound too large");

  std::optional<Natural> found;
  for_each_prime(to_u64(search_bound), [&](std::uint64_t g) {
    const Natural gz = from_u64(g);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (!is_primitive_root(gz, qs[i], phi_factors[i])) return true;
    }
    found = gz;
    return false;
  });
  return found;
}

}  // namespace euclidlab
