#pragma once

#include <cstdint>

#include "euclidlab/natural.hpp"

namespace euclidlab {

/// Deterministic Miller-Rabin with proven base sets below 3.3 * 10^24; above
/// that, Baillie-PSW (strong base-2 test plus strong Lucas test, Selfridge
/// parameters). No BPSW counterexample is known.
bool is_prime(const Natural& m);

/// Fast path for machine words; deterministic for every 64-bit input.
bool is_prime_u64(std::uint64_t m);

/// Upper end of the range where the 13 prime bases 2..41 are proven.
Natural deterministic_mr_limit();

namespace detail {

// Exposed for testing the BPSW components on known pseudoprimes.
bool is_strong_probable_prime(const Natural& n, unsigned long base);
bool is_strong_lucas_probable_prime(const Natural& n);

}  // namespace detail
}  // namespace euclidlab
