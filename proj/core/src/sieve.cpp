#include "euclidlab/sieve.hpp"

#include <algorithm>
#include <cmath>

namespace euclidlab {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> simple_sieve(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace

void for_each_prime(std::uint64_t limit, const std::function<bool(std::uint64_t)>& visit) {
  if (limit < 2) return;
  const auto root = static_cast<std::uint32_t>(isqrt(limit));
  const std::vector<std::uint32_t> base = simple_sieve(root);

  std::vector<std::uint8_t> segment(kSieveSegmentSize);
  for (std::uint64_t low = 0; low <= limit; low += kSieveSegmentSize) {
    const std::uint64_t high = std::min(limit, low + kSieveSegmentSize - 1);
    std::fill(segment.begin(), segment.end(), std::uint8_t{1});
    for (std::uint32_t p : base) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > high) break;
      std::uint64_t start = std::max(pp, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) segment[j - low] = 0;
    }
    for (std::uint64_t v = std::max<std::uint64_t>(low, 2); v <= high; ++v) {
      if (segment[v - low] && !visit(v)) return;
    }
    if (high == limit) break;
  }
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for_each_prime(limit, [&](std::uint64_t p) {
    out.push_back(p);
    return true;
  });
  return out;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  if (count == 0) return out;
  // p_n < n (ln n + ln ln n) for n >= 6.
  double n = static_cast<double>(std::max<std::size_t>(count, 6));
  auto limit = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
  for_each_prime(limit, [&](std::uint64_t p) {
    out.push_back(p);
    return out.size() < count;
  });
  return out;
}

std::span<const std::uint32_t> small_primes() {
  static const std::vector<std::uint32_t> table = simple_sieve(kTrialDivisionBound);
  return table;
}

}  // namespace euclidlab
