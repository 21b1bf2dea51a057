#pragma once

#include <cstdint>

namespace euclidlab::detail {

__extension__ using u128 = unsigned __int128;

// Montgomery arithmetic modulo an odd 64-bit modulus, R = 2^64.
class Montgomery64 {
 public:
  explicit Montgomery64(std::uint64_t modulus) : n_(modulus) {
    std::uint64_t inv = modulus;  // correct to 3 bits for odd n
    for (int i = 0; i < 5; ++i) inv *= 2 - modulus * inv;
    inv_ = inv;
    const std::uint64_t r = (0 - modulus) % modulus;  // 2^64 mod n
    r2_ = static_cast<std::uint64_t>(static_cast<u128>(r) * r % modulus);
    one_ = r;
  }

  std::uint64_t modulus() const { return n_; }
  std::uint64_t one() const { return one_; }

  std::uint64_t reduce(u128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * inv_;
    const std::uint64_t hi_t = static_cast<std::uint64_t>(t >> 64);
    const std::uint64_t hi_mn = static_cast<std::uint64_t>((static_cast<u128>(m) * n_) >> 64);
    return hi_t >= hi_mn ? hi_t - hi_mn : hi_t + (n_ - hi_mn);
  }

  std::uint64_t to(std::uint64_t x) const { return reduce(static_cast<u128>(x % n_) * r2_); }
  std::uint64_t from(std::uint64_t x) const { return reduce(x); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce(static_cast<u128>(a) * b);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return (s < a || s >= n_) ? s - n_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (n_ - b); }

  std::uint64_t pow(std::uint64_t base_mont, std::uint64_t exp) const {
    std::uint64_t result = one_;
    while (exp > 0) {
      if (exp & 1) result = mul(result, base_mont);
      base_mont = mul(base_mont, base_mont);
      exp >>= 1;
    }
    return result;
  }

 private:
  std::uint64_t n_;
  std::uint64_t inv_;
  std::uint64_t r2_;
  std::uint64_t one_;
};

}  // namespace euclidlab::detail
