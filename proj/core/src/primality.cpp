#include "euclidlab/primality.hpp"

#include <array>

#include "euclidlab/montgomery.hpp"

namespace euclidlab {
namespace {

constexpr std::array<std::uint32_t, 15> kSmall = {2,  3,  5,  7,  11, 13, 17, 19,
                                                  23, 29, 31, 37, 41, 43, 47};

bool mr_round_u64(const detail::Montgomery64& mont, std::uint64_t d, int s, std::uint64_t a) {
  const std::uint64_t n = mont.modulus();
  a %= n;
  if (a == 0) return true;
  const std::uint64_t one = mont.one();
  const std::uint64_t minus_one = n - one;  // -1 in Montgomery form
  std::uint64_t x = mont.pow(mont.to(a), d);
  if (x == one || x == minus_one) return true;
  for (int r = 1; r < s; ++r) {
    x = mont.mul(x, x);
    if (x == minus_one) return true;
    if (x == one) return false;
  }
  return false;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : kSmall) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 53 * 53) return true;

  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  const detail::Montgomery64 mont(n);
  // Sinclair's base set: deterministic for all n < 2^64.
  static constexpr std::array<std::uint64_t, 7> kBases = {2,      325,     9375,      28178,
                                                           450775, 9780504, 1795265022};
  for (std::uint64_t a : kBases) {
    if (!mr_round_u64(mont, d, s, a)) return false;
  }
  return true;
}

Natural deterministic_mr_limit() {
  // psi_13 (Sorenson & Webster): the first strong pseudoprime to bases 2..41.
  static const Natural limit("3317044064679887385961981", 10);
  return limit;
}

namespace detail {

bool is_strong_probable_prime(const Natural& n, unsigned long base) {
  if (n < 2) return false;
  if (n == 2) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  const Natural n_minus_1 = n - 1;
  Natural d = n_minus_1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  Natural a = base;
  a %= n;
  if (a == 0) return true;
  Natural x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

bool is_strong_lucas_probable_prime(const Natural& n) {
  if (n < 2) return false;
  if (n == 2) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;

  // Selfridge method A: first D in 5, -7, 9, -11, ... with (D/n) = -1.
  long D = 5;
  for (;;) {
    Natural dz = D;
    const int j = mpz_jacobi(dz.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0) {
      Natural g = abs(dz);
      if (g != n) return false;  // nontrivial common factor
    }
    D = D > 0 ? -(D + 2) : -(D - 2);
  }
  const long P = 1;
  const long Q = (1 - D) / 4;

  // n + 1 = d * 2^s with d odd.
  Natural d = n + 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  auto half = [&n](Natural v) {
    if (mpz_odd_p(v.get_mpz_t())) v += n;
    mpz_tdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), 1);
    return v;
  };
  auto mod = [&n](Natural v) {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    return v;
  };

  // Left-to-right binary ladder over the bits of d, starting at k = 1.
  Natural U = 1;
  Natural V = P;
  Natural Qk = mod(Natural(Q));
  const Natural Dn = mod(Natural(D));
  const Natural Qn = mod(Natural(Q));
  const auto bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  for (long i = static_cast<long>(bits) - 2; i >= 0; --i) {
    // k -> 2k
    U = mod(U * V);
    V = mod(V * V - 2 * Qk);
    Qk = mod(Qk * Qk);
    if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
      // k -> k + 1
      Natural U1 = half(mod(P * U + V));
      Natural V1 = half(mod(Dn * U + P * V));
      U = std::move(U1);
      V = std::move(V1);
      Qk = mod(Qk * Qn);
    }
  }
  if (U == 0 || V == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    V = mod(V * V - 2 * Qk);
    if (V == 0) return true;
    Qk = mod(Qk * Qk);
  }
  return false;
}

}  // namespace detail

bool is_prime(const Natural& m) {
  if (sgn(m) <= 0) return false;
  if (fits_u64(m)) return is_prime_u64(to_u64(m));
  for (std::uint32_t p : kSmall) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) return false;
  }
  if (m < deterministic_mr_limit()) {
    for (std::uint32_t p : kSmall) {
      if (p > 41) break;
      if (!detail::is_strong_probable_prime(m, p)) return false;
    }
    return true;
  }
  return detail::is_strong_probable_prime(m, 2) && detail::is_strong_lucas_probable_prime(m);
}

}  // namespace euclidlab
