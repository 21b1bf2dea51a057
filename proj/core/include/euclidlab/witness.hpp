#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "euclidlab/factor.hpp"
#include "euclidlab/instance.hpp"
#include "euclidlab/natural.hpp"

namespace euclidlab {

/// Outcome of a witness search: either a prime q outside {p_1, ..., p_n}
/// dividing P_I - eps(I) for some I in D, or a verified absence.
struct WitnessReport {
  bool found = false;
  std::optional<Natural> witness_prime;
  std::optional<Subset> subset;
  /// P_I - eps(I) at `subset`, and its full factorization.
  std::optional<Integer> target;
  FactorMap certificate;
  std::uint64_t subsets_checked = 0;
  std::string instance_digest;
};

nlohmann::json to_json_value(const WitnessReport& r);

/// Scans D in canonical order and returns the first subset with a target value
/// that has a prime factor outside the instance primes, reporting the smallest
/// such prime. Target values are reduced by the instance primes and only the
/// cofactor is factored, so an absent report never needs a full factorization.
/// Subsets are examined on `threads` workers (0 = all processors); the report
/// is identical for every thread count.
WitnessReport witness_search(const PrimePowerInstance& inst, unsigned threads = 1);

/// Recomputes the report's claims against the instance.
bool verify_witness_report(const PrimePowerInstance& inst, const WitnessReport& r);

struct Theorem1Run {
  Sign sign;
  PrimePowerInstance instance;
  WitnessReport report;
};

struct Theorem1Result {
  std::vector<Theorem1Run> runs;  // eps = +1, then eps = -1
  bool holds() const;
};

/// D = P_1 u P_{n-2} u P_{n-1} u extra, eps constant; runs witness_search for
/// both constant signs. Primes must be increasing.
Theorem1Result check_theorem1(const std::vector<Natural>& primes,
                              const std::vector<std::uint32_t>& exponents,
                              const std::vector<Subset>& extra_subsets = {}, unsigned threads = 1);

/// check_theorem1, raising TheoremViolation when either sign has no witness.
Theorem1Result verify_theorem1(const std::vector<Natural>& primes,
                               const std::vector<std::uint32_t>& exponents,
                               const std::vector<Subset>& extra_subsets = {}, unsigned threads = 1);

struct NegativeExample {
  /// Greatest prime dividing one of the signed seed values.
  Natural greatest_prime;
  PrimePowerInstance instance;
  /// 1-based position of each seed prime in the extended instance.
  std::vector<unsigned> seed_positions;
};

/// Extends the seed primes by every prime <= q, where q is the greatest prime
/// dividing prod_{i in I} q_i^{e_i} +- 1 over all nonempty proper I of S_k.
/// When `signs` is given, q is instead taken over the seed family only, with
/// those signs. New primes get exponent 1; the family (and signs) are carried
/// over re-indexed, so the extended instance has no witness.
NegativeExample negative_example_extend(const std::vector<Natural>& seed_primes,
                                        const std::vector<std::uint32_t>& seed_exponents,
                                        const SubsetFamily& seed_family,
                                        const std::optional<SignAssignment>& signs = std::nullopt);

enum class PoolMode {
  /// Primes drawn from all primes <= pool_bound.
  bounded,
  /// The n smallest primes only.
  smallest,
};

struct ScanConfig {
  unsigned n_min = 3;
  unsigned n_max = 3;
  std::uint64_t pool_bound = 100;
  PoolMode pool = PoolMode::bounded;
  std::uint32_t exponent_bound = 1;
  std::set<unsigned> sizes{1};
  std::vector<Sign> signs{Sign::plus};
  std::uint64_t budget = 1'000'000;
  unsigned threads = 1;
};

struct ScanHit {
  PrimePowerInstance instance;
  WitnessReport report;
};

struct ScanResult {
  std::uint64_t instances_checked = 0;
  /// Instances without a witness, in enumeration order.
  std::vector<ScanHit> absent;
};

/// Number of instances scan_relaxation would enumerate (saturating).
std::uint64_t scan_instance_count(const ScanConfig& config);

/// Enumerates n in [n_min, n_max], increasing prime tuples from the pool,
/// exponent tuples in [1, exponent_bound]^n and each sign, with
/// D = build_family(n, sizes) and constant eps. Returns the instances with no
/// witness. Throws BudgetExceeded before doing any work when the instance
/// count exceeds config.budget.
ScanResult scan_relaxation(const ScanConfig& config);

/// P_{-I} = eps_{-I} + prod_{i in I} p_i^{alpha_{i,I}}.
struct AlphaSolution {
  Subset subset;
  std::map<unsigned, std::uint32_t> alpha;  // 1-based index -> exponent
  Sign complement_sign;
};

/// Factors P_{-I} - eps_{-I}; returns the exponents when every prime factor is
/// some p_i with i in I, nullopt otherwise (the value then has a witness).
std::optional<AlphaSolution> alpha_decompose(const PrimePowerInstance& inst, Subset subset);

bool verify_alpha_solution(const PrimePowerInstance& inst, const AlphaSolution& sol);

/// For a prime p != 3 with 3 | p^alpha + eps, the unique case among
///   1: eps = -1, alpha even;
///   2: eps = -1, alpha odd, p = 1 (mod 6);
///   3: eps = +1, alpha odd, p = 2 (mod 3).
/// nullopt when 3 does not divide p^alpha + eps. Throws DomainError for p = 3
/// or non-prime p, and LemmaViolation if zero or several cases apply.
std::optional<int> classify_expos_case(const Natural& p, std::uint32_t alpha, Sign eps);

/// p - 1 is 2^k with k >= 1, i.e. p = 2^(2^m) + 1. Throws DomainError for
/// non-prime p.
bool fermat_prime_check(const Natural& p);

}  // namespace euclidlab
