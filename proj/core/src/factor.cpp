#include "euclidlab/factor.hpp"

#include <numeric>

#include "euclidlab/errors.hpp"
#include "euclidlab/montgomery.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"

namespace euclidlab {

void FactorMap::add(const Natural& prime, std::uint32_t exponent) {
  if (exponent == 0) return;
  factors_[prime] += exponent;
}

std::uint32_t FactorMap::exponent_of(const Natural& prime) const {
  auto it = factors_.find(prime);
  return it == factors_.end() ? 0 : it->second;
}

std::vector<Natural> FactorMap::primes() const {
  std::vector<Natural> out;
  out.reserve(factors_.size());
  for (const auto& [p, e] : factors_) out.push_back(p);
  return out;
}

Natural FactorMap::product() const {
  Natural out = 1;
  for (const auto& [p, e] : factors_) out *= pow(p, e);
  return out;
}

namespace {

constexpr std::size_t kBrentBatch = 128;

std::uint64_t brent_u64(std::uint64_t n, std::uint64_t c_plain) {
  const detail::Montgomery64 mont(n);
  const std::uint64_t c = mont.to(c_plain);
  auto f = [&](std::uint64_t v) { return mont.add(mont.mul(v, v), c); };

  std::uint64_t y = mont.to(2), x = y, ys = y, q = mont.one();
  std::uint64_t g = 1;
  for (std::uint64_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    for (std::uint64_t k = 0; k < r && g == 1; k += kBrentBatch) {
      ys = y;
      const std::uint64_t steps = std::min<std::uint64_t>(kBrentBatch, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        y = f(y);
        q = mont.mul(q, x > y ? x - y : y - x);
      }
      g = std::gcd(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

Natural brent_mpz(const Natural& n, unsigned long c) {
  auto f = [&](const Natural& v) {
    Natural out = v * v + c;
    mpz_tdiv_r(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
    return out;
  };
  Natural y = 2, x = y, ys = y, q = 1, g = 1, diff;
  for (std::uint64_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    for (std::uint64_t k = 0; k < r && g == 1; k += kBrentBatch) {
      ys = y;
      const std::uint64_t steps = std::min<std::uint64_t>(kBrentBatch, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        y = f(y);
        diff = x - y;
        q *= abs(diff);
        mpz_tdiv_r(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      diff = x - ys;
      diff = abs(diff);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

// Largest k >= 2 with m = r^k, or 1 when m is not a perfect power.
unsigned long perfect_power_root(const Natural& m, Natural& root) {
  if (!mpz_perfect_power_p(m.get_mpz_t())) return 1;
  const auto bits = mpz_sizeinbase(m.get_mpz_t(), 2);
  for (unsigned long k = bits; k >= 2; --k) {
    if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) return k;
  }
  return 1;
}

void factor_composite(const Natural& n, std::uint32_t multiplicity, FactorMap& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.add(n, multiplicity);
    return;
  }
  Natural root;
  if (const unsigned long k = perfect_power_root(n, root); k > 1) {
    factor_composite(root, multiplicity * static_cast<std::uint32_t>(k), out);
    return;
  }
  const Natural d = pollard_brent(n);
  Natural rest = n / d;
  // Split off every copy of the shared part so the two recursions stay coprime.
  Natural g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), rest.get_mpz_t());
  if (g == 1) {
    factor_composite(d, multiplicity, out);
    factor_composite(rest, multiplicity, out);
  } else {
    FactorMap part;
    factor_composite(d, 1, part);
    for (const auto& [p, e] : part) {
      std::uint32_t extra = 0;
      while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
        ++extra;
      }
      out.add(p, (e + extra) * multiplicity);
    }
    factor_composite(rest, multiplicity, out);
  }
}

}  // namespace

Natural pollard_brent(const Natural& n) {
  if (mpz_even_p(n.get_mpz_t())) return Natural(2);
  for (unsigned long c = 1;; ++c) {
    Natural d;
    if (fits_u64(n)) {
      d = from_u64(brent_u64(to_u64(n), c));
    } else {
      d = brent_mpz(n, c);
    }
    if (d != n && d != 1) return d;
  }
}

FactorMap factorize(const Natural& m) {
  if (sgn(m) <= 0) throw DomainError("factorize: expected m >= 1, got " + to_string(m));
  FactorMap out;
  Natural rest = m;

  // Primality of the cofactor is rechecked whenever a factor is removed and at
  // a few checkpoints, so a large prime cofactor ends trial division early.
  bool rest_is_prime = false;
  std::size_t next_check = 64;
  const auto primes = small_primes();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (rest == 1 || rest_is_prime) break;
    const std::uint32_t p = primes[i];
    if (mpz_cmp_ui(rest.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) {
      rest_is_prime = true;  // no factor <= sqrt(rest) left
      break;
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      std::uint32_t e = 0;
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
      out.add(Natural(p), e);
      if (rest != 1) rest_is_prime = is_prime(rest);
    } else if (i == next_check) {
      rest_is_prime = is_prime(rest);
      next_check *= 4;
    }
  }
  if (rest == 1) return out;
  if (rest_is_prime) {
    out.add(rest, 1);
    return out;
  }
  factor_composite(rest, 1, out);
  return out;
}

Natural strip_primes(Natural m, const std::vector<Natural>& primes) {
  for (const Natural& p : primes) {
    while (sgn(m) != 0 && mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    }
  }
  return m;
}

std::vector<std::uint64_t> small_prime_factors(const Natural& m, std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (sgn(m) == 0) return out;
  Natural rest = abs(m);
  auto visit = [&](std::uint64_t p) {
    if (rest == 1) return false;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      out.push_back(p);
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
    }
    return true;
  };
  if (bound <= kTrialDivisionBound) {
    for (std::uint32_t p : small_primes()) {
      if (p > bound || !visit(p)) break;
    }
  } else {
    for_each_prime(bound, visit);
  }
  return out;
}

}  // namespace euclidlab
