#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "euclidlab/errors.hpp"
#include "euclidlab/factor.hpp"
#include "euclidlab/sieve.hpp"
#include "euclidlab/witness.hpp"

using namespace euclidlab;

namespace {

Subset S(std::initializer_list<unsigned> idx) { return Subset::from_indices(idx); }

PrimePowerInstance make(std::vector<Natural> primes, std::vector<std::uint32_t> exps, SubsetFamily family,
                        Sign eps = Sign::plus) {
  return PrimePowerInstance(std::move(primes), std::move(exps), std::move(family), SignAssignment(eps));
}

// Factors every target completely, no early exit, and picks the canonical
// witness: first subset in canonical order, then its smallest outside prime.
std::optional<std::pair<Subset, Natural>> brute_witness(const PrimePowerInstance& inst) {
  std::optional<std::pair<Subset, Natural>> best;
  for (Subset s : inst.family().members()) {
    const FactorMap f = factorize(inst.target_value(s));
    for (const auto& [q, e] : f) {
      const bool inside = std::find(inst.primes().begin(), inst.primes().end(), q) != inst.primes().end();
      if (!inside && !best) best = std::make_pair(s, q);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("witness_search examples") {
  const auto all = build_family(3, {1, 2});
  const auto plus = witness_search(make({2, 3, 5}, {1, 1, 1}, all, Sign::plus));
  REQUIRE(plus.found);
  CHECK(*plus.witness_prime == 7);
  CHECK(*plus.subset == S({2, 3}));
  CHECK(*plus.target == 14);
  CHECK(plus.certificate.product() == 14);

  const auto minus = witness_search(make({2, 3, 5}, {1, 1, 1}, all, Sign::minus));
  REQUIRE(minus.found);
  CHECK(*minus.witness_prime == 7);
  CHECK(*minus.subset == S({1, 2}));

  const auto inst = make({2, 3, 5}, {1, 1, 1}, build_family(3, {1}));
  const auto none = witness_search(inst);
  CHECK_FALSE(none.found);
  CHECK(none.subsets_checked == 3);
  CHECK(none.instance_digest == inst.digest());
  CHECK(verify_witness_report(inst, none));
  CHECK(verify_witness_report(make({2, 3, 5}, {1, 1, 1}, all), plus));
}

TEST_CASE("witness reports verify and tampering is caught") {
  const auto inst = make({2, 3, 5}, {1, 1, 1}, build_family(3, {1, 2}));
  auto r = witness_search(inst);
  CHECK(verify_witness_report(inst, r));
  r.witness_prime = Natural(3);
  CHECK_FALSE(verify_witness_report(inst, r));
}

TEST_CASE("witness_search agrees with the no-early-exit oracle") {
  const auto pool = primes_up_to(50);
  std::size_t instances = 0, found = 0;
  for (unsigned n = 3; n <= 6; ++n) {
    // Stride through prime tuples so every n gets a few hundred instances.
    const std::size_t stride = n == 3 ? 1 : n == 4 ? 7 : n == 5 ? 31 : 101;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::size_t counter = 0;
    for (;;) {
      if (counter++ % stride == 0) {
        std::vector<Natural> primes;
        for (auto i : idx) primes.push_back(Natural(static_cast<unsigned long>(pool[i])));
        for (std::uint32_t e = 1; e <= 3; ++e) {
          std::vector<std::uint32_t> exps(n, 1);
          exps[counter % n] = e;
          exps[(counter + 1) % n] = 1 + (e + counter) % 3;
          for (const auto& family : {build_family(n, {1}), build_family(n, {1, n - 1})}) {
            for (Sign eps : {Sign::plus, Sign::minus}) {
              const auto inst = make(primes, exps, family, eps);
              const auto expected = brute_witness(inst);
              const auto got = witness_search(inst, 1 + counter % 3);
              ++instances;
              if (got.found != expected.has_value()) FAIL("found/absent mismatch on " << to_json_value(inst).dump());
              if (expected) {
                ++found;
                if (*got.subset != expected->first || *got.witness_prime != expected->second) {
                  FAIL("different canonical witness on " << to_json_value(inst).dump());
                }
              }
              if (!verify_witness_report(inst, got)) FAIL("report does not verify");
            }
          }
        }
      }
      // next combination
      std::size_t i = n;
      while (i-- > 0 && idx[i] == pool.size() - n + i) {
      }
      if (i == static_cast<std::size_t>(-1)) break;
      ++idx[i];
      for (std::size_t j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  CHECK(instances > 2000);
  CHECK(found > 0);
  CHECK(found < instances);
}

TEST_CASE("parity: odd primes give an even target, so 2 is a witness") {
  const auto r = witness_search(make({3, 5, 7}, {1, 1, 1}, build_family(3, {1})));
  REQUIRE(r.found);
  CHECK(*r.witness_prime == 2);
  CHECK(*r.subset == S({1}));
}

TEST_CASE("Theorem 1 examples") {
  CHECK(verify_theorem1({2, 3, 5}, {1, 1, 1}).holds());
  CHECK(verify_theorem1({2, 3, 7}, {1, 2, 1}).holds());
  const auto r = verify_theorem1({3, 5, 7}, {1, 1, 1});
  REQUIRE(r.runs.size() == 2);
  CHECK(r.runs[0].sign == Sign::plus);
  CHECK(r.runs[1].sign == Sign::minus);
  const auto extra = check_theorem1({2, 3, 5, 7}, {1, 1, 1, 1}, {S({1, 2})});
  CHECK(extra.runs[0].instance.family().contains(S({1, 2})));
  CHECK_THROWS_AS(check_theorem1({5, 3, 2}, {1, 1, 1}), DomainError);
}

TEST_CASE("negative_example_extend") {
  const auto ex = negative_example_extend({2, 3, 5}, {1, 1, 1}, build_family(3, {1, 2}));
  // Largest signed value over proper subsets is 3*5+1 = 16 or 2*5+1 = 11: q = 11.
  CHECK(ex.greatest_prime == 11);
  CHECK(ex.instance.primes() == std::vector<Natural>{2, 3, 5, 7, 11});
  CHECK(ex.seed_positions == std::vector<unsigned>{1, 2, 3});
  CHECK_FALSE(witness_search(ex.instance).found);

  const auto single = negative_example_extend({2, 3, 5}, {1, 1, 1}, SubsetFamily::from_subsets(3, {S({2, 3})}),
                                              SignAssignment(Sign::plus));
  CHECK(single.greatest_prime == 7);
  CHECK(single.instance.primes() == std::vector<Natural>{2, 3, 5, 7});
  CHECK_FALSE(witness_search(single.instance).found);

  // Seeds that are not an initial segment get re-indexed.
  const auto gap = negative_example_extend({3, 7, 13}, {2, 1, 1}, build_family(3, {1}));
  CHECK_FALSE(witness_search(gap.instance).found);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(gap.instance.primes()[gap.seed_positions[i] - 1] == std::vector<Natural>{3, 7, 13}[i]);
  }
}

TEST_CASE("scan_relaxation") {
  ScanConfig cfg;
  cfg.n_min = cfg.n_max = 4;
  cfg.pool_bound = 15;
  cfg.exponent_bound = 2;
  cfg.sizes = {1, 2, 3};
  cfg.signs = {Sign::plus, Sign::minus};
  const auto r = scan_relaxation(cfg);
  CHECK(r.instances_checked == scan_instance_count(cfg));
  CHECK(r.instances_checked == 15 * 16 * 2);
  CHECK(r.absent.empty());

  ScanConfig neg;
  neg.n_min = 5;
  neg.n_max = 10;
  neg.pool = PoolMode::smallest;
  neg.sizes = {1};
  const auto all_absent = scan_relaxation(neg);
  CHECK(all_absent.instances_checked == 6);
  CHECK(all_absent.absent.size() == 6);

  cfg.budget = 10;
  CHECK_THROWS_AS(scan_relaxation(cfg), BudgetExceeded);
  ScanConfig bad;
  bad.sizes = {3};
  CHECK_THROWS_AS(scan_relaxation(bad), DomainError);
}

TEST_CASE("scan results do not depend on the thread count") {
  ScanConfig cfg;
  cfg.n_min = 3;
  cfg.n_max = 4;
  cfg.pool_bound = 23;
  cfg.sizes = {1};
  cfg.signs = {Sign::plus, Sign::minus};
  cfg.threads = 1;
  const auto a = scan_relaxation(cfg);
  cfg.threads = 8;
  const auto b = scan_relaxation(cfg);
  REQUIRE(a.absent.size() == b.absent.size());
  for (std::size_t i = 0; i < a.absent.size(); ++i) CHECK(a.absent[i].instance == b.absent[i].instance);
}

TEST_CASE("alpha_decompose") {
  const auto minus = make({2, 3, 5}, {1, 1, 1}, build_family(3, {1, 2}), Sign::minus);
  const auto a = alpha_decompose(minus, S({1}));
  REQUIRE(a.has_value());
  CHECK(a->alpha.at(1) == 4);
  CHECK(a->complement_sign == Sign::minus);
  CHECK(verify_alpha_solution(minus, *a));
  CHECK_FALSE(alpha_decompose(make({2, 3, 5}, {1, 1, 1}, build_family(3, {1, 2})), S({1})).has_value());
  CHECK_FALSE(alpha_decompose(minus, S({2})).has_value());
  auto tampered = *a;
  tampered.alpha[1] = 3;
  CHECK_FALSE(verify_alpha_solution(minus, tampered));
}

TEST_CASE("classify_expos_case") {
  CHECK(classify_expos_case(5, 2, Sign::minus) == 1);
  CHECK(classify_expos_case(7, 1, Sign::minus) == 2);
  CHECK(classify_expos_case(5, 1, Sign::plus) == 3);
  CHECK_FALSE(classify_expos_case(5, 2, Sign::plus).has_value());
  CHECK_THROWS_AS(classify_expos_case(3, 1, Sign::plus), DomainError);
  CHECK_THROWS_AS(classify_expos_case(5, 0, Sign::plus), DomainError);
  // Exactly one case whenever 3 divides the value.
  for (std::uint64_t p : primes_up_to(100)) {
    if (p == 3) continue;
    for (std::uint32_t alpha = 1; alpha <= 10; ++alpha) {
      for (Sign eps : {Sign::plus, Sign::minus}) {
        const Natural pn(static_cast<unsigned long>(p));
        const bool divisible = divides(Natural(3), pow(pn, alpha) + to_int(eps));
        CHECK(classify_expos_case(pn, alpha, eps).has_value() == divisible);
      }
    }
  }
}

TEST_CASE("fermat_prime_check") {
  CHECK(fermat_prime_check(17));
  CHECK_FALSE(fermat_prime_check(7));
  CHECK(fermat_prime_check(65537));
  CHECK(fermat_prime_check(3));
  CHECK_FALSE(fermat_prime_check(2));
  CHECK_THROWS_AS(fermat_prime_check(15), DomainError);
}
