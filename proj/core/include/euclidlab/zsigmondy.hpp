#pragma once

#include <cstdint>
#include <vector>

#include "euclidlab/natural.hpp"

namespace euclidlab {

/// The triple (a, b, n) of a^n - b^n, with a > b >= 1 and n >= 2.
struct ZsigmondyQuery {
  Natural a;
  Natural b;
  std::uint32_t n = 2;

  /// Throws DomainError unless a > b >= 1 and n >= 2.
  void validate() const;
};

enum class ZsigmondyMethod {
  /// Factor a^n - b^n and keep the primes dividing no a^k - b^k, k < n.
  definition,
  /// Factor only the homogeneous cyclotomic value Phi_n(a, b), which every
  /// primitive prime divides, then apply the same filter.
  cyclotomic,
};

/// (a, b, n) = (2, 1, 6), or n = 2 with a + b a power of two.
bool is_exception(const ZsigmondyQuery& q);

/// Primes p | a^n - b^n with p not dividing a^k - b^k for 1 <= k < n,
/// ascending. Both methods return the same set.
std::vector<Natural> primitive_prime_divisors(const ZsigmondyQuery& q,
                                              ZsigmondyMethod method = ZsigmondyMethod::definition);

/// Phi_n(a, b) = prod_{d | n} (a^d - b^d)^{mu(n/d)}.
Natural cyclotomic_value(const Natural& a, const Natural& b, std::uint32_t n);

/// True iff p divides a^n - b^n but no a^k - b^k with 1 <= k < n.
bool is_primitive_divisor(const Natural& p, const ZsigmondyQuery& q);

}  // namespace euclidlab
