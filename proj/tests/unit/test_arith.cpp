#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "euclidlab/digest.hpp"
#include "euclidlab/errors.hpp"
#include "euclidlab/factor.hpp"
#include "euclidlab/json_io.hpp"
#include "euclidlab/modular.hpp"
#include "euclidlab/natural.hpp"
#include "euclidlab/parallel.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"

using namespace euclidlab;

namespace {

bool trial_division_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

Natural N(const char* s) { return parse_natural(s); }

}  // namespace

TEST_CASE("natural parsing and conversion") {
  CHECK(parse_integer("-42") == -42);
  CHECK(parse_integer("+7") == 7);
  CHECK_THROWS_AS(parse_natural("-1"), DomainError);
  CHECK_THROWS_AS(parse_natural("12a"), DomainError);
  CHECK_THROWS_AS(parse_natural(""), DomainError);
  const Natural big = N("18446744073709551615");
  CHECK(fits_u64(big));
  CHECK(to_u64(big) == UINT64_MAX);
  CHECK_FALSE(fits_u64(big + 1));
  CHECK(from_u64(UINT64_MAX) == big);
  CHECK(to_string(pow(Natural(2), 70)) == "1180591620717411303424");
  CHECK(bit_length(Natural(0)) == 0);
  CHECK(bit_length(Natural(255)) == 8);
}

TEST_CASE("is_prime examples") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK(is_prime(N("2305843009213693951")));  // 2^61 - 1
  CHECK_FALSE(is_prime(N("2305843009213693953")));
  CHECK(is_prime(N("170141183460469231731687303715884105727")));  // 2^127 - 1
  CHECK_FALSE(is_prime(N("340282366920938463463374607431768211457")));  // F7, composite
}

TEST_CASE("is_prime agrees with trial division below 10^6") {
  const auto primes = primes_up_to(1'000'000);
  std::size_t next = 0;
  for (std::uint64_t m = 0; m <= 1'000'000; ++m) {
    const bool expected = next < primes.size() && primes[next] == m;
    if (expected) ++next;
    if (is_prime_u64(m) != expected) FAIL("is_prime_u64 disagrees at " << m);
  }
  // The sieve itself against trial division on a smaller range.
  for (std::uint64_t m = 0; m <= 20'000; ++m) {
    const bool sieve = std::binary_search(primes.begin(), primes.end(), m);
    if (sieve != trial_division_prime(m)) FAIL("sieve disagrees at " << m);
    if (is_prime(Natural(static_cast<unsigned long>(m))) != sieve) FAIL("is_prime disagrees at " << m);
  }
}

TEST_CASE("pseudoprimes do not fool the combined test") {
  for (unsigned long n : {2047ul, 3277ul, 4033ul, 4681ul, 8321ul}) {
    CHECK(detail::is_strong_probable_prime(n, 2));
    CHECK_FALSE(is_prime(n));
  }
  for (unsigned long n : {5459ul, 5777ul, 10877ul, 16109ul, 18971ul}) {
    CHECK(detail::is_strong_lucas_probable_prime(n));
    CHECK_FALSE(is_prime(n));
  }
  // Strong pseudoprime to every prime base up to 37.
  const Natural psi12 = N("318665857834031151167461");
  for (unsigned long b : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    CHECK(detail::is_strong_probable_prime(psi12, b));
  }
  CHECK_FALSE(is_prime(psi12));
  CHECK_FALSE(is_prime(N("3317044064679887385961981")));
  // Carmichael numbers and a large semiprime.
  for (unsigned long n : {561ul, 1105ul, 1729ul, 2465ul, 2821ul, 6601ul}) CHECK_FALSE(is_prime(n));
  CHECK_FALSE(is_prime(N("2305843009213693951") * N("618970019642690137449562111")));
  CHECK(is_prime(N("618970019642690137449562111")));  // 2^89 - 1
}

TEST_CASE("primes_up_to and sieve helpers") {
  CHECK(primes_up_to(0).empty());
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(primes_up_to(1'000'000).size() == 78498);
  CHECK(primes_up_to(3'000'000).size() == 216816);  // crosses segment boundaries
  CHECK(first_primes(10).back() == 29);
  std::vector<std::uint64_t> seen;
  for_each_prime(100, [&](std::uint64_t p) {
    seen.push_back(p);
    return p < 13;
  });
  CHECK(seen == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("factorize examples") {
  CHECK(factorize(1).empty());
  const auto f63 = factorize(63);
  CHECK(f63.size() == 2);
  CHECK(f63.exponent_of(3) == 2);
  CHECK(f63.exponent_of(7) == 1);
  const auto f960 = factorize(960);
  CHECK(f960.exponent_of(2) == 6);
  CHECK(f960.exponent_of(3) == 1);
  CHECK(f960.exponent_of(5) == 1);
  CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("factorize reconstructs every m up to 10^5") {
  for (unsigned long m = 1; m <= 100'000; ++m) {
    const auto f = factorize(m);
    if (f.product() != m) FAIL("product mismatch at " << m);
    for (const auto& [p, e] : f) {
      if (!is_prime(p) || e == 0) FAIL("bad factor at " << m);
    }
  }
}

TEST_CASE("factorize beyond trial division") {
  const Natural p = N("1000000007"), q = N("998244353"), r = N("2305843009213693951");
  const auto f = factorize(p * p * q * r);
  CHECK(f.size() == 3);
  CHECK(f.exponent_of(p) == 2);
  CHECK(f.exponent_of(r) == 1);
  CHECK(f.product() == p * p * q * r);
  // Perfect power of a large prime.
  const auto g = factorize(pow(N("4294967311"), 5));
  CHECK(g.size() == 1);
  CHECK(g.exponent_of(N("4294967311")) == 5);
  // Two 40-bit primes: found by rho, not trial division.
  const auto h = factorize(N("1000000000039") * N("1099511627791"));
  CHECK(h.primes() == std::vector<Natural>{N("1000000000039"), N("1099511627791")});
  const auto k = factorize(pow(Natural(2), 64) + 1);
  CHECK(k.primes() == std::vector<Natural>{274177, N("67280421310721")});
}

TEST_CASE("strip_primes and small_prime_factors") {
  CHECK(strip_primes(2 * 2 * 3 * 7 * 7 * 11, {Natural(2), Natural(7)}) == 33);
  CHECK(small_prime_factors(2 * 3 * 3 * 101 * 1009, 200) == std::vector<std::uint64_t>{2, 3, 101});
  CHECK(small_prime_factors(1, 100).empty());
}

TEST_CASE("mod_pow") {
  CHECK(mod_pow(2, 0, 7) == 1);
  CHECK(mod_pow(2, 10, 1000) == 24);
  CHECK(mod_pow(3, 4, 5) == 1);
  CHECK(mod_pow(5, 0, 1) == 0);
}

TEST_CASE("multiplicative_order") {
  CHECK(multiplicative_order(1, 5) == 1);
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(2, 5) == 4);
  CHECK(multiplicative_order(10, 999) == 3);
  CHECK_THROWS_AS(multiplicative_order(2, 4), DomainError);
  CHECK_THROWS_AS(multiplicative_order(3, 1), DomainError);
}

TEST_CASE("orders divide p - 1 and match enumeration") {
  for (std::uint64_t p : primes_up_to(1000)) {
    for (std::uint64_t a = 1; a < p; a += (p > 100 ? 37 : 1)) {
      const Natural k = multiplicative_order(Natural(static_cast<unsigned long>(a)), Natural(static_cast<unsigned long>(p)));
      if (!divides(k, Natural(static_cast<unsigned long>(p - 1)))) FAIL("order does not divide p-1");
      if (p < 100) {
        std::uint64_t x = a % p, e = 1;
        while (x != 1) x = x * a % p, ++e;
        CHECK(k == static_cast<unsigned long>(e));
      }
    }
  }
}

TEST_CASE("carmichael lambda") {
  CHECK(carmichael_lambda(8) == 2);
  CHECK(carmichael_lambda(15) == 4);
  CHECK(carmichael_lambda(561) == 80);
}

TEST_CASE("primitive_root") {
  CHECK(primitive_root(3) == 2);
  CHECK(primitive_root(5) == 2);
  CHECK(primitive_root(7) == 3);
  CHECK(primitive_root(23) == 5);
  CHECK_THROWS_AS(primitive_root(2), DomainError);
  CHECK_THROWS_AS(primitive_root(9), DomainError);
}

TEST_CASE("crt_combine") {
  const std::vector<Congruence> one{{0, 1}};
  CHECK(crt_combine(one) == Congruence{0, 1});
  CHECK(crt_combine(std::span<const Congruence>{}) == Congruence{0, 1});
  const std::vector<Congruence> two{{1, 2}, {2, 3}};
  CHECK(crt_combine(two) == Congruence{5, 6});
  const std::vector<Congruence> three{{2, 3}, {3, 5}, {2, 7}};
  CHECK(crt_combine(three) == Congruence{23, 105});
  const std::vector<Congruence> bad{{1, 4}, {1, 6}};
  CHECK_THROWS_AS(crt_combine(bad), DomainError);
  const std::vector<Congruence> out_of_range{{5, 3}};
  CHECK_THROWS_AS(crt_combine(out_of_range), DomainError);
}

TEST_CASE("common_primitive_root_prime") {
  const std::vector<Natural> q5{5}, q35{3, 5}, q7{7}, q_bad{4};
  CHECK(common_primitive_root_prime(q5, 100) == Natural(2));
  CHECK(common_primitive_root_prime(q35, 100) == Natural(2));
  CHECK(common_primitive_root_prime(q7, 100) == Natural(3));
  CHECK_FALSE(common_primitive_root_prime(q7, 2).has_value());
  CHECK_THROWS_AS(common_primitive_root_prime(q_bad, 100), DomainError);
}

TEST_CASE("parallel helpers are schedule independent") {
  for (unsigned threads : {1u, 2u, 8u}) {
    const auto squares = parallel_map(1000, threads, [](std::size_t i) { return i * i; });
    CHECK(squares[999] == 999u * 999u);
    const auto hit = parallel_find_first(1000, threads, [](std::size_t i) -> std::optional<std::size_t> {
      if (i % 97 == 96) return i;
      return std::nullopt;
    });
    REQUIRE(hit.has_value());
    CHECK(hit->first == 96);
  }
  CHECK_THROWS_AS(parallel_map(10, 4,
                               [](std::size_t i) -> int {
                                 if (i == 3) throw DomainError("three");
                                 return 0;
                               }),
                  DomainError);
}

TEST_CASE("json integers and digests") {
  CHECK(to_json_value(Integer(-5)) == nlohmann::json(-5));
  CHECK(to_json_value(pow(Natural(2), 80)) == nlohmann::json("1208925819614629174706176"));
  CHECK(integer_from_json(nlohmann::json("1208925819614629174706176")) == pow(Natural(2), 80));
  CHECK(natural_from_json(nlohmann::json(12)) == 12);
  CHECK_THROWS(natural_from_json(nlohmann::json(-1)));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(canonical_digest(nlohmann::json{{"b", 1}, {"a", 2}}) == canonical_digest(nlohmann::json{{"a", 2}, {"b", 1}}));
}
