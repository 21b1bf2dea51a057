#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace euclidlab {

/// Number of integers covered by one sieve segment.
inline constexpr std::uint64_t kSieveSegmentSize = std::uint64_t{1} << 20;

/// All primes <= limit in increasing order (segmented sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Streams the primes <= limit in increasing order without materializing them.
/// The callback may return false to stop early.
void for_each_prime(std::uint64_t limit, const std::function<bool(std::uint64_t)>& visit);

/// The first `count` primes.
std::vector<std::uint64_t> first_primes(std::size_t count);

/// Primes <= 10^6, computed once; used for trial division.
std::span<const std::uint32_t> small_primes();

inline constexpr std::uint32_t kTrialDivisionBound = 1'000'000;

}  // namespace euclidlab
