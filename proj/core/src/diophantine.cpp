#include "euclidlab/diophantine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "euclidlab/errors.hpp"
#include "euclidlab/factor.hpp"
#include "euclidlab/json_io.hpp"
#include "euclidlab/modular.hpp"
#include "euclidlab/parallel.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"

namespace euclidlab {

namespace {

std::string describe(const Lemma8Solution& s) {
  return "(p=" + std::to_string(s.p) + ", q=" + std::to_string(s.q) + ", x=" + std::to_string(s.x) +
         ", y=" + std::to_string(s.y) + ", z=" + std::to_string(s.z) + ")";
}

Integer signed_pow(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

}  // namespace

bool lemma8_classified(const Lemma8Solution& s) {
  if (s.p != 2 || s.x != 2 || s.z != 1) return false;
  if (!is_prime_u64(s.y)) return false;
  return s.y < 64 && s.q == (std::uint64_t{1} << s.y) - 1;
}

bool lemma8_holds(const Lemma8Solution& s) {
  if (!is_prime_u64(s.p) || !is_prime_u64(s.q) || (s.q + 1) % s.p != 0) return false;
  if (s.x < 1 || s.y < 2) return false;
  const Natural q = from_u64(s.q);
  return pow(q, s.x) - 1 == pow(from_u64(s.p), s.y) * (pow(q, s.z) - 1);
}

std::vector<Lemma8Solution> lemma8_catalog(const Lemma8Bounds& b, unsigned threads) {
  if (b.q_bound < 1 || b.x_bound < 1 || b.y_bound < 1 || b.z_bound < 1) {
    throw DomainError("lemma8 bounds must be at least 1");
  }
  const std::vector<std::uint64_t> qs = primes_up_to(b.q_bound);
  auto per_q = parallel_map(qs.size(), threads, [&](std::size_t i) {
    std::vector<Lemma8Solution> found;
    const std::uint64_t q = qs[i];
    const Natural qn = from_u64(q);
    const std::vector<std::uint64_t> ps = small_prime_factors(from_u64(q + 1), q + 1);
    std::vector<Natural> qpow(b.x_bound + 1);  // q^e - 1
    for (std::uint32_t e = 0; e <= b.x_bound; ++e) qpow[e] = pow(qn, e) - 1;
    for (std::uint64_t p : ps) {
      for (std::uint32_t x = 1; x <= b.x_bound; ++x) {
        // z = 0 makes the right side vanish; z >= x makes it too large.
        for (std::uint32_t z = 1; z <= b.z_bound && z < x; ++z) {
          const Natural& den = z <= b.x_bound ? qpow[z] : pow(qn, z) - 1;
          if (!divides(den, qpow[x])) continue;
          Natural ratio = qpow[x] / den;
          Natural rest;
          const Natural pn = from_u64(p);
          const auto y = mpz_remove(rest.get_mpz_t(), ratio.get_mpz_t(), pn.get_mpz_t());
          if (rest != 1 || y < 2 || y > b.y_bound) continue;
          found.push_back(Lemma8Solution{p, q, x, static_cast<std::uint32_t>(y), z});
        }
      }
    }
    return found;
  });
  std::vector<Lemma8Solution> out;
  for (auto& v : per_q) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Lemma8Solution> lemma8_scan(const Lemma8Bounds& bounds, unsigned threads) {
  auto out = lemma8_catalog(bounds, threads);
  for (const auto& s : out) {
    if (!lemma8_classified(s)) throw LemmaViolation("solution outside the Mersenne classification: " + describe(s));
  }
  return out;
}

nlohmann::json to_json_value(const Lemma8Solution& s) {
  return {{"p", s.p}, {"q", s.q}, {"x", s.x}, {"y", s.y}, {"z", s.z}, {"classified", lemma8_classified(s)}};
}

std::vector<Natural> smooth_numbers(const std::vector<std::uint64_t>& primes, std::uint64_t bound) {
  std::set<Natural> out;
  if (bound < 1) return {};
  out.insert(1);
  std::vector<Natural> frontier{1};
  const Natural limit = from_u64(bound);
  while (!frontier.empty()) {
    std::vector<Natural> next;
    for (const auto& v : frontier) {
      for (std::uint64_t p : primes) {
        Natural w = v * from_u64(p);
        if (w <= limit && out.insert(w).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  return {out.begin(), out.end()};
}

std::uint64_t pillai_work(const PillaiConfig& c) {
  const std::uint64_t coefs = smooth_numbers(c.prime_set, c.coef_max).size();
  std::uint64_t a_count = 0;
  if (c.a_max >= c.a_min) {
    for (std::uint64_t p : primes_up_to(c.a_max)) a_count += p >= c.a_min;
  }
  const std::uint64_t pairs = std::uint64_t{c.exp_max} * (c.exp_max > 0 ? c.exp_max - 1 : 0);
  return coefs * pairs * (a_count + 1);
}

std::vector<PillaiSolution> pillai_scan(const PillaiConfig& c) {
  if (c.b == 0) throw DomainError("pillai: b must be nonzero");
  for (std::uint64_t p : c.prime_set) {
    if (!is_prime_u64(p)) throw DomainError("pillai: prime set contains " + std::to_string(p));
  }
  const std::uint64_t work = pillai_work(c);
  if (work > c.budget) {
    throw BudgetExceeded("pillai scan needs " + std::to_string(work) + " evaluations, budget is " +
                             std::to_string(c.budget),
                         work, c.budget);
  }
  const std::vector<Natural> coefs = smooth_numbers(c.prime_set, c.coef_max);
  std::vector<std::uint64_t> as;
  for (std::uint64_t p : primes_up_to(c.a_max)) {
    if (p >= c.a_min) as.push_back(p);
  }

  struct Right {
    Natural B;
    std::uint32_t y1, y2;
  };
  std::map<Integer, std::vector<Right>> right;
  std::vector<Integer> bpow(c.exp_max + 1);
  for (std::uint32_t e = 1; e <= c.exp_max; ++e) bpow[e] = signed_pow(c.b, e);
  for (const auto& B : coefs) {
    for (std::uint32_t y1 = 1; y1 <= c.exp_max; ++y1) {
      for (std::uint32_t y2 = 1; y2 <= c.exp_max; ++y2) {
        if (y1 == y2) continue;
        right[B * (bpow[y1] - bpow[y2])].push_back(Right{B, y1, y2});
      }
    }
  }

  auto per_a = parallel_map(as.size(), c.threads, [&](std::size_t i) {
    std::vector<PillaiSolution> found;
    const Natural a = from_u64(as[i]);
    std::vector<Natural> apow(c.exp_max + 1);
    for (std::uint32_t e = 1; e <= c.exp_max; ++e) apow[e] = pow(a, e);
    for (const auto& A : coefs) {
      for (std::uint32_t x1 = 1; x1 <= c.exp_max; ++x1) {
        for (std::uint32_t x2 = 1; x2 <= c.exp_max; ++x2) {
          if (x1 == x2) continue;
          auto it = right.find(A * (apow[x1] - apow[x2]));
          if (it == right.end()) continue;
          for (const auto& r : it->second) {
            Integer bb = r.B * c.b;
            if (bb < 0) bb = -bb;
            if (gcd(A * a, bb) != 1) continue;
            found.push_back(PillaiSolution{a, A, r.B, x1, x2, r.y1, r.y2});
          }
        }
      }
    }
    return found;
  });
  std::vector<PillaiSolution> out;
  for (auto& v : per_a) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end(), [](const PillaiSolution& l, const PillaiSolution& r) {
    return std::tie(l.a, l.A, l.B, l.x1, l.x2, l.y1, l.y2) < std::tie(r.a, r.A, r.B, r.x1, r.x2, r.y1, r.y2);
  });
  return out;
}

bool pillai_holds(const PillaiSolution& s, const Integer& b) {
  if (s.x1 == s.x2 || s.x1 < 1 || s.x2 < 1 || s.y1 < 1 || s.y2 < 1) return false;
  if (!is_prime(s.a)) return false;
  Integer bb = s.B * b;
  if (bb < 0) bb = -bb;
  if (gcd(s.A * s.a, bb) != 1) return false;
  return s.A * (pow(s.a, s.x1) - pow(s.a, s.x2)) == s.B * (signed_pow(b, s.y1) - signed_pow(b, s.y2));
}

nlohmann::json to_json_value(const PillaiSolution& s) {
  return {{"a", to_json_value(s.a)}, {"A", to_json_value(s.A)}, {"B", to_json_value(s.B)},
          {"x1", s.x1},              {"x2", s.x2},              {"y1", s.y1},
          {"y2", s.y2}};
}

namespace {

void validate_odd_primes(const std::vector<Natural>& qs, const char* who) {
  if (qs.empty()) throw DomainError(std::string(who) + ": prime list is empty");
  std::set<Natural> seen;
  for (const auto& q : qs) {
    if (q < 3 || !is_prime(q)) throw DomainError(std::string(who) + ": " + to_string(q) + " is not an odd prime");
    if (!seen.insert(q).second) throw DomainError(std::string(who) + ": repeated prime " + to_string(q));
  }
}

}  // namespace

Example13Report construct_example_13(const Example13Config& c) {
  validate_odd_primes(c.qs, "example13");
  if (c.sample_size < 2 || c.sample_size > 64) throw DomainError("example13: sample size must be in [2, 64]");
  Example13Report r;
  r.k = 1;
  for (const auto& q : c.qs) {
    Natural m = q - 1;
    mpz_lcm(r.k.get_mpz_t(), r.k.get_mpz_t(), m.get_mpz_t());
  }
  if (!fits_u64(r.k) || r.k > 4096) throw DomainError("example13: k = " + to_string(r.k) + " is too large");
  const unsigned long k = r.k.get_ui();
  const std::set<Natural> excluded(c.qs.begin(), c.qs.end());

  // Smallest-first merge of the streams p^k, p^2k, ... over primes p not in Q.
  using Entry = std::tuple<Natural, Natural, unsigned long>;  // value, base, n
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  Natural next_base = 2;
  auto push_next_base = [&] {
    while (excluded.count(next_base)) mpz_nextprime(next_base.get_mpz_t(), next_base.get_mpz_t());
    heap.emplace(pow(next_base, k), next_base, 1);
    mpz_nextprime(next_base.get_mpz_t(), next_base.get_mpz_t());
  };
  push_next_base();
  while (r.elements.size() < c.sample_size) {
    auto [value, base, n] = heap.top();
    heap.pop();
    if (n == 1) push_next_base();
    heap.emplace(pow(base, k * (n + 1)), base, n + 1);
    r.elements.push_back(value);
    r.bases.push_back(base);
  }

  std::mt19937_64 rng(c.seed);
  const std::uint64_t full = c.sample_size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << c.sample_size) - 1;
  while (r.subsets_checked < c.subset_samples) {
    const std::uint64_t mask = rng() & full;
    if (mask == 0 || mask == full) continue;
    Natural product = 1;
    for (std::size_t i = 0; i < c.sample_size; ++i) {
      if (mask >> i & 1) product *= r.elements[i];
    }
    product += 1;
    for (const auto& q : c.qs) {
      if (mpz_fdiv_ui(product.get_mpz_t(), q.get_ui()) != 2) {
        ++r.residue_failures;
        break;
      }
    }
    ++r.subsets_checked;
  }

  const Natural largest = *std::max_element(r.bases.begin(), r.bases.end());
  r.perpendicular_matches = true;
  for (std::uint64_t p : primes_up_to(largest.get_ui())) {
    const Natural q = from_u64(p);
    const bool perp = std::any_of(r.elements.begin(), r.elements.end(), [&](const Natural& a) { return divides(q, a); });
    (perp ? r.perpendicular : r.not_perpendicular).push_back(q);
    if (perp == (excluded.count(q) != 0)) r.perpendicular_matches = false;
  }
  return r;
}

nlohmann::json to_json_value(const Example13Report& r) {
  return {{"k", to_json_value(r.k)},
          {"elements", to_json_value(r.elements)},
          {"subsets_checked", r.subsets_checked},
          {"residue_failures", r.residue_failures},
          {"perpendicular_count", r.perpendicular.size()},
          {"not_perpendicular", to_json_value(r.not_perpendicular)},
          {"perpendicular_matches", r.perpendicular_matches},
          {"holds", r.holds()}};
}

bool Example14Report::holds() const {
  return divisible_elements == 0 &&
         std::all_of(divisibility_witness.begin(), divisibility_witness.end(), [](const auto& w) { return w.has_value(); });
}

Example14Report construct_example_14(const Example14Config& c) {
  validate_odd_primes(c.qs, "example14");
  if (c.sample_size < 1) throw DomainError("example14: sample size must be positive");
  const auto g = common_primitive_root_prime(c.qs, c.g_search_bound);
  if (!g) {
    throw DomainError("example14: no prime common primitive root up to " + to_string(c.g_search_bound));
  }
  Example14Report r;
  r.g = *g;
  r.epsilon0 = c.epsilon0;
  std::set<std::uint64_t> exps;
  for (const auto& qn : c.qs) {
    const std::uint64_t q = qn.get_ui();
    for (std::uint64_t n = 1; n <= c.sample_size; ++n) {
      exps.insert(c.epsilon0 == Sign::plus ? (q - 1) * n : (q - 1) * (2 * n - 1) / 2);
    }
  }
  for (std::uint64_t e : exps) {
    if (r.exponents.size() == c.sample_size) break;
    r.exponents.push_back(e);
    r.elements.push_back(pow(r.g, e));
  }
  const long eps = to_int(c.epsilon0);
  for (const auto& q : c.qs) {
    std::optional<Natural> witness;
    for (const auto& a : r.elements) {
      if (divides(q, a - eps)) {
        witness = a;
        break;
      }
    }
    r.divisibility_witness.push_back(witness);
  }
  for (const auto& a : r.elements) {
    if (std::any_of(c.qs.begin(), c.qs.end(), [&](const Natural& q) { return divides(q, a); })) ++r.divisible_elements;
  }
  return r;
}

nlohmann::json to_json_value(const Example14Report& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : r.divisibility_witness) witnesses.push_back(w ? to_json_value(*w) : nlohmann::json(nullptr));
  return {{"g", to_json_value(r.g)},
          {"epsilon0", to_int(r.epsilon0)},
          {"exponents", r.exponents},
          {"elements", to_json_value(r.elements)},
          {"divisibility_witness", std::move(witnesses)},
          {"divisible_elements", r.divisible_elements},
          {"holds", r.holds()}};
}

}  // namespace euclidlab
