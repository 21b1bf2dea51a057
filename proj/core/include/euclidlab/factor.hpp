#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "euclidlab/natural.hpp"

namespace euclidlab {

/// Unique factorization: prime -> exponent, keys ascending.
class FactorMap {
 public:
  using Map = std::map<Natural, std::uint32_t>;
  using const_iterator = Map::const_iterator;

  FactorMap() = default;

  /// Multiplies the represented value by prime^exponent.
  void add(const Natural& prime, std::uint32_t exponent = 1);

  const_iterator begin() const { return factors_.begin(); }
  const_iterator end() const { return factors_.end(); }
  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }

  bool contains(const Natural& prime) const { return factors_.count(prime) != 0; }
  std::uint32_t exponent_of(const Natural& prime) const;

  std::vector<Natural> primes() const;

  /// Product of p^e over all entries (1 for the empty map).
  Natural product() const;

  friend bool operator==(const FactorMap&, const FactorMap&) = default;

 private:
  Map factors_;
};

/// Complete factorization of m >= 1. Trial division by the primes <= 10^6
/// (stopping once the cofactor is 1, below p^2, or proven prime), then
/// Pollard rho with Brent's cycle detection on the remaining cofactors, using
/// the polynomial x^2 + c with c = 1, 2, 3, ... until a split is found.
FactorMap factorize(const Natural& m);

/// Pollard-Brent on a composite n; returns a nontrivial divisor. Deterministic.
Natural pollard_brent(const Natural& n);

/// Removes every factor of `primes` from m and returns the cofactor.
Natural strip_primes(Natural m, const std::vector<Natural>& primes);

/// The prime factors of m that are <= bound (by trial division, so bound should
/// stay at desk scale), ascending.
std::vector<std::uint64_t> small_prime_factors(const Natural& m, std::uint64_t bound);

}  // namespace euclidlab
