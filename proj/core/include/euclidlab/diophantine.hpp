#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "euclidlab/instance.hpp"
#include "euclidlab/natural.hpp"

namespace euclidlab {

// q^x - 1 = p^y (q^z - 1) with p | q + 1, p and q prime, x >= 1, y >= 2.
struct Lemma8Solution {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;

  friend auto operator<=>(const Lemma8Solution&, const Lemma8Solution&) = default;
};

struct Lemma8Bounds {
  std::uint64_t q_bound = 1000;
  std::uint32_t x_bound = 30;
  std::uint32_t y_bound = 30;
  std::uint32_t z_bound = 30;
};

/// The expected shape: p = 2, x = 2, z = 1, y prime, q = 2^y - 1.
bool lemma8_classified(const Lemma8Solution& s);

/// Recomputes both sides exactly and checks the side conditions.
bool lemma8_holds(const Lemma8Solution& s);

/// Every solution within the bounds, sorted. Loops over primes q, primes p | q + 1
/// and pairs (x, z); y is read off as the p-adic valuation of the exact quotient.
/// Does not judge the classification.
std::vector<Lemma8Solution> lemma8_catalog(const Lemma8Bounds& bounds, unsigned threads = 1);

/// lemma8_catalog, then throws LemmaViolation naming the first solution that is
/// not of the classified shape.
std::vector<Lemma8Solution> lemma8_scan(const Lemma8Bounds& bounds, unsigned threads = 1);

nlohmann::json to_json_value(const Lemma8Solution& s);

// A (a^x1 - a^x2) = B (b^y1 - b^y2).
struct PillaiSolution {
  Natural a;
  Natural A;
  Natural B;
  std::uint32_t x1 = 0;
  std::uint32_t x2 = 0;
  std::uint32_t y1 = 0;
  std::uint32_t y2 = 0;

  friend bool operator==(const PillaiSolution&, const PillaiSolution&) = default;
};

struct PillaiConfig {
  Integer b = 2;
  std::vector<std::uint64_t> prime_set;  // allowed prime factors of A and B
  std::uint64_t a_min = 2;
  std::uint64_t a_max = 50;
  std::uint64_t coef_max = 1;
  std::uint32_t exp_max = 12;
  std::uint64_t budget = 10'000'000;
  unsigned threads = 1;
};

/// Number of left plus right sides the scan would evaluate.
std::uint64_t pillai_work(const PillaiConfig& config);

/// Bounded catalog: a prime in [a_min, a_max], A and B <= coef_max built from
/// prime_set, exponents in [1, exp_max], x1 != x2, gcd(Aa, Bb) = 1. Ordered by
/// (a, A, B, x1, x2, y1, y2). Throws DomainError for b = 0 and BudgetExceeded
/// when pillai_work exceeds the budget.
std::vector<PillaiSolution> pillai_scan(const PillaiConfig& config);

bool pillai_holds(const PillaiSolution& s, const Integer& b);

nlohmann::json to_json_value(const PillaiSolution& s);

/// Numbers in [1, bound] whose prime factors all lie in `primes`, ascending.
std::vector<Natural> smooth_numbers(const std::vector<std::uint64_t>& primes, std::uint64_t bound);

struct Example13Config {
  std::vector<Natural> qs;
  std::size_t sample_size = 50;
  std::size_t subset_samples = 200;
  std::uint64_t seed = 13;
};

struct Example13Report {
  Natural k;
  std::vector<Natural> bases;     // base prime of each sampled element
  std::vector<Natural> elements;  // p^{nk}, ascending
  std::size_t subsets_checked = 0;
  std::size_t residue_failures = 0;
  /// Primes up to the largest sampled base that divide some sampled element.
  std::vector<Natural> perpendicular;
  std::vector<Natural> not_perpendicular;
  bool perpendicular_matches = false;

  bool holds() const { return residue_failures == 0 && perpendicular_matches; }
};

/// k = lcm(q - 1), A = {p^{nk} : p prime not in Q, n >= 1} sampled smallest
/// first. Random subsets of the sample (mt19937_64, fixed seed) must satisfy
/// prod(B) + 1 = 2 mod every q; among primes up to the largest sampled base,
/// exactly the members of Q must fail to divide an element.
Example13Report construct_example_13(const Example13Config& config);

nlohmann::json to_json_value(const Example13Report& r);

struct Example14Config {
  std::vector<Natural> qs;
  Sign epsilon0 = Sign::plus;
  std::size_t sample_size = 50;
  Natural g_search_bound = 10'000;
};

struct Example14Report {
  Natural g;
  Sign epsilon0 = Sign::plus;
  std::vector<std::uint64_t> exponents;
  std::vector<Natural> elements;  // g^e, ascending
  /// For each q: the smallest sampled a with q | a - eps0, if any.
  std::vector<std::optional<Natural>> divisibility_witness;
  std::size_t divisible_elements = 0;  // sampled a divisible by some q; must be 0

  bool holds() const;
};

/// g is the least prime that is a primitive root modulo every q. Exponents are
/// (q - 1) n for eps0 = +1 and (q - 1)(2n - 1) / 2 for eps0 = -1; the sample is
/// the smallest `sample_size` distinct exponents. Throws DomainError when no g
/// lies within the search bound.
Example14Report construct_example_14(const Example14Config& config);

nlohmann::json to_json_value(const Example14Report& r);

}  // namespace euclidlab
