#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "euclidlab/factor.hpp"
#include "euclidlab/instance.hpp"
#include "euclidlab/natural.hpp"

namespace euclidlab {

struct PrimePower {
  Natural prime;
  std::uint32_t exponent = 1;

  Natural value() const { return pow(prime, exponent); }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Decomposes value = p^k with k >= 1; throws DomainError otherwise (1 is not
/// a prime power).
PrimePower as_prime_power(const Natural& value);

/// Why a prime was adjoined: it divides prod(B) - eps0 for the recorded B.
struct Provenance {
  Natural prime;
  std::uint32_t generation = 0;
  std::vector<std::size_t> subset;  // 0-based indices into ClosureState::elements()
  Integer value;
};

/// A finite prefix of a set A of prime powers grown under
/// "q | prod_{a in B} a - eps0 for B in P*(A)  =>  q divides some element".
/// Elements keep insertion order (seed, then each generation ascending), so
/// provenance indices stay valid as the state grows.
class ClosureState {
 public:
  /// Seed elements must be distinct prime powers.
  ClosureState(std::vector<PrimePower> seed, Sign epsilon0);

  const std::vector<PrimePower>& elements() const { return elements_; }
  std::vector<Natural> values() const;
  Sign epsilon0() const { return epsilon0_; }
  std::uint32_t generation() const { return generation_; }
  /// Generation in which each element joined (0 for the seed).
  const std::vector<std::uint32_t>& element_generations() const { return element_generation_; }
  const std::map<Natural, Provenance>& provenance() const { return provenance_; }

  /// q divides some element, i.e. q is the base of one.
  bool covers(const Natural& prime) const;

  /// For each size s: every proper s-subset of the first expanded_prefix(s)
  /// elements has been expanded. This is the frontier.
  std::size_t expanded_prefix(unsigned size) const;

 private:
  friend struct ClosureStepper;

  std::vector<PrimePower> elements_;
  std::vector<std::uint32_t> element_generation_;
  std::vector<Natural> bases_sorted_;
  Sign epsilon0_;
  std::map<Natural, Provenance> provenance_;
  std::vector<std::size_t> expanded_prefix_;  // index = subset size
  std::uint32_t generation_ = 0;
};

struct ClosureStepOptions {
  unsigned cap = 4;
  /// Only primes <= element_bound are adjoined (found by trial division). With
  /// no bound every value is factored completely.
  std::optional<std::uint64_t> element_bound;
  std::uint64_t subset_budget = 1'000'000;
  unsigned threads = 1;
};

/// Number of unexpanded B in P*(A) with |B| <= cap.
std::uint64_t pending_subset_count(const ClosureState& state, unsigned cap);

/// Expands every pending subset of size <= cap (by size, then lexicographic on
/// element order), factors prod(B) - eps0 and adjoins each new prime factor with
/// exponent 1, keeping the first subset that produced it as provenance.
/// Throws DomainError for cap < 1 and BudgetExceeded when the pending count
/// exceeds the subset budget.
ClosureState closure_step(const ClosureState& state, const ClosureStepOptions& options);

enum class ClosureOutcome { covered, stalled, step_budget_exhausted, subset_budget_exceeded };

const char* to_string(ClosureOutcome outcome);

struct GenerationSummary {
  std::uint32_t generation = 0;
  std::vector<Natural> added;
  std::uint64_t subsets_expanded = 0;
  std::size_t covered = 0;  // primes <= prime_bound covered after this step
};

struct ClosureRunOptions {
  unsigned cap = 4;
  std::uint32_t max_generations = 64;
  /// Defaults to the prime bound.
  std::optional<std::uint64_t> element_bound;
  std::uint64_t subset_budget = 1'000'000;
  unsigned threads = 1;
};

struct ClosureRun {
  ClosureState state;
  std::uint64_t prime_bound = 0;
  std::vector<GenerationSummary> generations;
  std::vector<Natural> covered;
  std::vector<Natural> uncovered;
  ClosureOutcome outcome = ClosureOutcome::stalled;
};

/// Steps until every prime <= prime_bound divides an element, the state stops
/// changing, or a budget runs out. Budget exhaustion is reported in `outcome`.
ClosureRun closure_run(std::vector<PrimePower> seed, Sign epsilon0, std::uint64_t prime_bound,
                       const ClosureRunOptions& options = {});

/// Derivation of `prime` back to the seed, parents before children. Empty for
/// seed primes; throws DomainError when the prime is not covered.
std::vector<Provenance> provenance_chain(const ClosureState& state, const Natural& prime);

/// Every provenance record recomputes: value = prod(B) - eps0 and prime | value.
bool verify_provenance(const ClosureState& state);

nlohmann::json to_json_value(const Provenance& p, const ClosureState& state);
nlohmann::json to_json_value(const ClosureRun& run);

/// Elements of A not divisible by p, split into classes A_r, r = 1..p-1. A class
/// with more than `threshold` elements stands in for an infinite one.
struct ResiduePartition {
  std::uint64_t modulus = 0;
  std::size_t threshold = 0;
  std::vector<std::vector<Natural>> classes;  // index r; classes[0] is unused
  std::vector<std::uint64_t> finite_classes;
  std::vector<std::uint64_t> infinite_classes;
};

/// Default threshold 2(p-1).
ResiduePartition partition_by_residue(std::span<const Natural> elements, std::uint64_t p,
                                      std::optional<std::size_t> threshold = std::nullopt);

struct WitnessSubset {
  std::uint64_t residue = 0;
  std::vector<Natural> elements;
};

/// B inside one residue class mod p with |B| = p - 1, so prod(B) = 1 (mod p).
/// Picks the smallest residue whose class has p - 1 members and takes its first
/// p - 1 members in A's order. nullopt when no class is large enough. Throws
/// DomainError for non-prime p or p dividing an element.
std::optional<WitnessSubset> witness_subset_for_prime(std::span<const Natural> elements, std::uint64_t p);

enum class RhoChainStatus {
  /// p | 1 + rho_n for the last link: the chain exhibits the contradiction.
  divisible_by_target,
  reached_max_n,
  /// A prime factor of 1 + rho_n is not in A.
  factor_outside_set,
  /// Not enough fresh elements above rho_0 in a needed residue class.
  class_exhausted,
  no_infinite_class,
  /// 1 + rho_n grew past the factoring limit.
  size_limit,
};

const char* to_string(RhoChainStatus status);

struct RhoChainOptions {
  std::optional<std::size_t> threshold;
  /// Defaults to p(p-1) - 2.
  std::optional<std::uint32_t> max_n;
  unsigned max_bits = 200;
};

struct RhoChain {
  std::uint64_t target = 0;
  ResiduePartition partition;
  Natural xi0 = 1;
  std::optional<Natural> a0;
  std::vector<Natural> rhos;
  /// Distinct elements of A whose product is rhos[n].
  std::vector<std::vector<Natural>> rho_factors;
  RhoChainStatus status = RhoChainStatus::no_infinite_class;
};

/// Builds rho_0 = a_0 xi_0 and rho_{n+1} = rho_0 prod a_i, where the a_i > rho_0
/// are fresh elements of A matching the prime factors of 1 + rho_n (with
/// multiplicity) mod p. Requires A to be a set of primes not containing p.
RhoChain rho_chain_build(std::span<const Natural> primes, std::uint64_t p, const RhoChainOptions& options = {});

/// Checks xi_0 | rho_n, 1 + rho_n = sum_{i=0}^{n+1} rho_0^i (mod p), and that
/// rho_n is a product of distinct members of `primes`, for every stored link.
bool verify_rho_chain(const RhoChain& chain, std::span<const Natural> primes);

nlohmann::json to_json_value(const RhoChain& chain);

}  // namespace euclidlab
