#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "euclidlab/errors.hpp"
#include "euclidlab/instance.hpp"
#include "euclidlab/sieve.hpp"

using namespace euclidlab;

namespace {

PrimePowerInstance make(std::vector<Natural> primes, std::vector<std::uint32_t> exps, std::set<unsigned> sizes,
                        Sign eps = Sign::plus) {
  const auto n = static_cast<unsigned>(primes.size());
  return PrimePowerInstance(std::move(primes), std::move(exps), build_family(n, sizes), SignAssignment(eps));
}

Subset S(std::initializer_list<unsigned> idx) { return Subset::from_indices(idx); }

}  // namespace

TEST_CASE("subset basics and canonical order") {
  const Subset s = S({1, 3});
  CHECK(s.bits() == 0b101);
  CHECK(s.size() == 2);
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(s.max_index() == 3);
  CHECK(s.indices() == std::vector<unsigned>{1, 3});
  CHECK(s.complement(4) == S({2, 4}));
  CHECK(to_string(s) == "1,3");
  CHECK(parse_subset("3, 1") == s);
  CHECK_THROWS_AS(S({0}), DomainError);
  CHECK_THROWS_AS(S({2, 2}), DomainError);
  CHECK_THROWS_AS(parse_subset("1,x"), DomainError);

  CHECK(canonical_less(S({3}), S({1, 2})));
  CHECK(canonical_less(S({1, 3}), S({2, 3})));
  CHECK(canonical_less(S({1, 2}), S({1, 3})));
  CHECK_FALSE(canonical_less(S({1, 2}), S({1, 2})));
}

TEST_CASE("build_family sizes") {
  const auto f3 = build_family(3, {1, 2});
  CHECK(f3.size() == 6);
  CHECK(build_family(4, {1, 2, 3}).size() == 14);
  CHECK(build_family(5, {1, 3, 4}).size() == 20);
  CHECK_THROWS_AS(build_family(4, {0}), DomainError);
  CHECK_THROWS_AS(build_family(4, {4}), DomainError);
  CHECK_THROWS_AS(build_family(2, {1}), DomainError);
  CHECK_THROWS_AS(build_family(25, {1}), DomainError);
  // Canonical order of members.
  const auto m = f3.members();
  CHECK(std::vector<Subset>(m.begin(), m.end()) ==
        std::vector<Subset>{S({1}), S({2}), S({3}), S({1, 2}), S({1, 3}), S({2, 3})});
}

TEST_CASE("explicit families") {
  const auto f = SubsetFamily::from_subsets(4, {S({2, 3}), S({1}), S({2, 3})});
  CHECK(f.size() == 2);
  CHECK(f.contains(S({1})));
  CHECK_FALSE(f.contains(S({2})));
  CHECK_THROWS_AS(SubsetFamily::from_subsets(3, {Subset::full(3)}), DomainError);
  CHECK_THROWS_AS(SubsetFamily::from_subsets(3, {Subset()}), DomainError);
  CHECK_THROWS_AS(SubsetFamily::from_subsets(3, {S({4})}), DomainError);
  const std::vector<Subset> extra{S({1, 2})};
  CHECK(build_family(3, {1}).with_extra(extra).size() == 4);
}

TEST_CASE("opposite_family") {
  CHECK(opposite_family(SubsetFamily::from_subsets(3, {S({1, 2})})).contains(S({3})));
  CHECK(opposite_family(build_family(4, {1})) == build_family(4, {3}));
  CHECK(opposite_family(build_family(3, {1, 2})) == build_family(3, {1, 2}));
  for (unsigned n = 3; n <= 7; ++n) {
    const auto f = SubsetFamily::from_subsets(n, {S({1}), S({1, 2}), S({2, 3})});
    CHECK(opposite_family(opposite_family(f)) == f);
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(make({2, 3, 4}, {1, 1, 1}, {1}), DomainError);
  CHECK_THROWS_AS(make({3, 2, 5}, {1, 1, 1}, {1}), DomainError);
  CHECK_THROWS_AS(make({2, 3, 3}, {1, 1, 1}, {1}), DomainError);
  CHECK_THROWS_AS(make({2, 3, 5}, {1, 0, 1}, {1}), DomainError);
  CHECK_THROWS_AS(make({2, 3, 5}, {1, 1}, {1}), DomainError);
  CHECK_THROWS_AS(PrimePowerInstance({2, 3, 5}, {1, 1, 1}, build_family(4, {1}), SignAssignment()), DomainError);
}

TEST_CASE("subset products and targets") {
  const auto inst = make({2, 3, 5}, {1, 1, 1}, {1, 2});
  CHECK(inst.subset_product(S({2, 3})) == 15);
  CHECK(make({2, 3, 5}, {2, 1, 1}, {1}).subset_product(S({1})) == 4);
  CHECK(inst.total_product() == 30);
  CHECK_THROWS_AS(inst.subset_product(Subset()), DomainError);
  CHECK(inst.target_value(S({1})) == 1);
  CHECK(inst.target_value(S({2, 3})) == 14);
  CHECK(make({2, 3, 5}, {1, 1, 1}, {1, 2}, Sign::minus).target_value(S({1, 2})) == 7);
  CHECK_THROWS_AS(make({2, 3, 5}, {1, 1, 1}, {1}).target_value(S({1, 2})), DomainError);
}

TEST_CASE("product identities and parity, exhaustive for n <= 8") {
  const auto primes = first_primes(8);
  for (unsigned n = 3; n <= 8; ++n) {
    std::vector<Natural> ps;
    std::vector<std::uint32_t> es;
    for (unsigned i = 0; i < n; ++i) {
      ps.push_back(Natural(static_cast<unsigned long>(primes[i])));
      es.push_back(1 + i % 3);
    }
    for (Sign eps : {Sign::plus, Sign::minus}) {
      const PrimePowerInstance inst(ps, es, build_family(n, {1}), SignAssignment(eps));
      for (std::uint64_t bits = 1; bits + 1 < (std::uint64_t{1} << n); ++bits) {
        const Subset s(bits);
        if (inst.subset_product(s) * inst.subset_product(s.complement(n)) != inst.total_product()) FAIL("P_I P_-I != P");
        const Integer v = inst.signed_value(s);
        if (v < 1) FAIL("target below 1");
        if (!s.contains(1) && v % 2 != 0) FAIL("odd target over odd primes");
      }
    }
  }
}

TEST_CASE("k-symmetry") {
  const auto sym = make({2, 3, 5, 7}, {1, 1, 1, 1}, {1, 3});
  CHECK(sym.is_k_symmetric(1));
  CHECK_FALSE(make({2, 3, 5, 7}, {1, 1, 1, 1}, {1}).is_k_symmetric(1));
  SignAssignment mixed(Sign::minus);
  for (unsigned i = 1; i <= 3; ++i) mixed.set(S({i}), Sign::plus);
  const PrimePowerInstance inst({2, 3, 5}, {1, 1, 1}, build_family(3, {1, 2}), mixed);
  CHECK_FALSE(inst.is_k_symmetric(1));
  CHECK(inst.complement_sign(S({1})) == Sign::minus);
}

TEST_CASE("sign assignments") {
  SignAssignment s(Sign::plus);
  s.set(S({1, 2}), Sign::minus);
  CHECK(s(S({1, 2})) == Sign::minus);
  CHECK(s(S({1})) == Sign::plus);
  CHECK(s.constant_on(build_family(3, {1})) == Sign::plus);
  CHECK_FALSE(s.constant_on(build_family(3, {1, 2})).has_value());
  CHECK(parse_sign("+1") == Sign::plus);
  CHECK(parse_sign("-1") == Sign::minus);
  CHECK_THROWS_AS(parse_sign("0"), DomainError);
}

TEST_CASE("json round trip is exact") {
  SignAssignment signs(Sign::minus);
  signs.set(S({1, 3}), Sign::plus);
  const PrimePowerInstance explicit_inst({2, 7, 11, 1000003}, {3, 1, 2, 1},
                                         SubsetFamily::from_subsets(4, {S({1}), S({1, 3}), S({2, 3, 4})}), signs);
  const auto sized = make({2, 3, 5, 7, 11}, {1, 2, 1, 1, 4}, {1, 3, 4});
  for (const auto& inst : {explicit_inst, sized}) {
    const nlohmann::json j = to_json_value(inst);
    const auto back = instance_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == inst);
    CHECK(to_json_value(back).dump() == j.dump());
    CHECK(back.digest() == inst.digest());
  }
  CHECK(to_json_value(sized)["family"] == nlohmann::json{{"sizes", {1, 3, 4}}});
  auto bad = to_json_value(sized);
  bad["unexpected"] = 1;
  CHECK_THROWS_AS(instance_from_json(bad), DomainError);
  // A bare sign and a bare subset array are accepted.
  auto bare = to_json_value(sized);
  bare["signs"] = -1;
  bare["family"] = nlohmann::json::parse("[[1], [2, 3]]");
  const auto parsed = instance_from_json(bare);
  CHECK(parsed.signs().default_sign() == Sign::minus);
  CHECK(parsed.family().size() == 2);
}
