#include "euclidlab/zsigmondy.hpp"

#include "euclidlab/errors.hpp"
#include "euclidlab/factor.hpp"
#include "euclidlab/modular.hpp"

namespace euclidlab {
namespace {

int moebius(std::uint32_t m) {
  int mu = 1;
  for (std::uint32_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) return 0;
    mu = -mu;
  }
  if (m > 1) mu = -mu;
  return mu;
}

Natural difference_of_powers(const Natural& a, const Natural& b, std::uint32_t k) {
  return pow(a, k) - pow(b, k);
}

}  // namespace

void ZsigmondyQuery::validate() const {
  if (!(b >= 1)) throw DomainError("zsigmondy: b must be >= 1");
  if (!(a > b)) throw DomainError("zsigmondy: a must exceed b");
  if (n < 2) throw DomainError("zsigmondy: n must be >= 2");
}

bool is_exception(const ZsigmondyQuery& q) {
  if (q.a == 2 && q.b == 1 && q.n == 6) return true;
  if (q.n == 2) {
    const Natural s = q.a + q.b;
    return mpz_popcount(s.get_mpz_t()) == 1;
  }
  return false;
}

Natural cyclotomic_value(const Natural& a, const Natural& b, std::uint32_t n) {
  if (n < 1) throw DomainError("cyclotomic_value: n must be >= 1");
  Natural num = 1, den = 1;
  for (std::uint32_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = moebius(n / d);
    if (mu == 1) num *= difference_of_powers(a, b, d);
    if (mu == -1) den *= difference_of_powers(a, b, d);
  }
  if (den == 0) throw DomainError("cyclotomic_value: a = b");
  return num / den;
}

bool is_primitive_divisor(const Natural& p, const ZsigmondyQuery& q) {
  const Natural ap = q.a % p, bp = q.b % p;
  if (mod_pow(ap, q.n, p) != mod_pow(bp, q.n, p)) return false;
  Natural x = ap, y = bp;  // a^k, b^k mod p
  for (std::uint32_t k = 1; k < q.n; ++k) {
    if (x == y) return false;
    x = x * ap % p;
    y = y * bp % p;
  }
  return true;
}

std::vector<Natural> primitive_prime_divisors(const ZsigmondyQuery& q, ZsigmondyMethod method) {
  q.validate();
  const Natural value = method == ZsigmondyMethod::definition
                            ? difference_of_powers(q.a, q.b, q.n)
                            : cyclotomic_value(q.a, q.b, q.n);
  std::vector<Natural> out;
  for (const Natural& p : factorize(value).primes()) {
    if (is_primitive_divisor(p, q)) out.push_back(p);
  }
  return out;
}

}  // namespace euclidlab
