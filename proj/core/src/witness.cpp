#include "euclidlab/witness.hpp"

#include <algorithm>
#include <limits>

#include "euclidlab/errors.hpp"
#include "euclidlab/json_io.hpp"
#include "euclidlab/parallel.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"

namespace euclidlab {

nlohmann::json to_json_value(const WitnessReport& r) {
  nlohmann::json j = {{"found", r.found},
                      {"subsets_checked", r.subsets_checked},
                      {"instance_digest", r.instance_digest}};
  if (r.found) {
    j["witness_prime"] = to_json_value(*r.witness_prime);
    j["subset"] = to_json_value(*r.subset);
    j["target"] = to_json_value(*r.target);
    j["certificate"] = to_json_value(r.certificate);
  }
  return j;
}

WitnessReport witness_search(const PrimePowerInstance& inst, unsigned threads) {
  const auto members = inst.family().members();
  const auto& primes = inst.primes();

  auto hit = parallel_find_first(members.size(), threads, [&](std::size_t i) -> std::optional<Natural> {
    const Integer target = inst.target_value(members[i]);
    const Natural rest = strip_primes(target, primes);
    if (rest == 1) return std::nullopt;  // includes the degenerate target 1
    return factorize(rest).begin()->first;
  });

  WitnessReport report;
  report.instance_digest = inst.digest();
  if (!hit) {
    report.subsets_checked = members.size();
    return report;
  }
  const Subset s = members[hit->first];
  report.found = true;
  report.witness_prime = hit->second;
  report.subset = s;
  report.target = inst.target_value(s);
  report.certificate = factorize(*report.target);
  report.subsets_checked = hit->first + 1;
  return report;
}

bool verify_witness_report(const PrimePowerInstance& inst, const WitnessReport& r) {
  if (r.instance_digest != inst.digest()) return false;
  if (!r.found) {
    for (Subset s : inst.family().members()) {
      if (strip_primes(inst.target_value(s), inst.primes()) != 1) return false;
    }
    return r.subsets_checked == inst.family().size();
  }
  if (!r.witness_prime || !r.subset || !r.target) return false;
  if (!inst.family().contains(*r.subset)) return false;
  if (*r.target != inst.target_value(*r.subset)) return false;
  if (r.certificate.product() != *r.target) return false;
  for (const auto& [p, e] : r.certificate) {
    if (!is_prime(p)) return false;
  }
  const auto& ps = inst.primes();
  if (std::find(ps.begin(), ps.end(), *r.witness_prime) != ps.end()) return false;
  return r.certificate.contains(*r.witness_prime);
}

// --- Theorem 1 -------------------------------------------------------------

bool Theorem1Result::holds() const {
  return std::all_of(runs.begin(), runs.end(), [](const Theorem1Run& r) { return r.report.found; });
}

Theorem1Result check_theorem1(const std::vector<Natural>& primes,
                              const std::vector<std::uint32_t>& exponents,
                              const std::vector<Subset>& extra_subsets, unsigned threads) {
  const auto n = static_cast<unsigned>(primes.size());
  if (n < 3) throw DomainError("check_theorem1: need n >= 3 primes");
  const SubsetFamily d0 = build_family(n, {1, n - 2, n - 1});
  const SubsetFamily family = d0.with_extra(extra_subsets);
  Theorem1Result out;
  for (Sign sign : {Sign::plus, Sign::minus}) {
    PrimePowerInstance inst(primes, exponents, family, SignAssignment(sign));
    WitnessReport report = witness_search(inst, threads);
    out.runs.push_back({sign, std::move(inst), std::move(report)});
  }
  return out;
}

Theorem1Result verify_theorem1(const std::vector<Natural>& primes,
                               const std::vector<std::uint32_t>& exponents,
                               const std::vector<Subset>& extra_subsets, unsigned threads) {
  Theorem1Result result = check_theorem1(primes, exponents, extra_subsets, threads);
  for (const auto& run : result.runs) {
    if (!run.report.found) {
      throw TheoremViolation("no witness prime for eps = " + std::to_string(to_int(run.sign)) +
                             " on instance " + to_json_value(run.instance).dump());
    }
  }
  return result;
}

// --- Negative example ------------------------------------------------------

NegativeExample negative_example_extend(const std::vector<Natural>& seed_primes,
                                        const std::vector<std::uint32_t>& seed_exponents,
                                        const SubsetFamily& seed_family,
                                        const std::optional<SignAssignment>& signs) {
  const auto k = static_cast<unsigned>(seed_primes.size());
  if (k < 3) throw DomainError("negative_example_extend: need k >= 3 seed primes");
  if (seed_exponents.size() != k) throw DomainError("negative_example_extend: one exponent per prime");
  if (seed_family.n() != k) throw DomainError("negative_example_extend: family must be over S_k");
  if (seed_family.empty()) throw DomainError("negative_example_extend: family must be nonempty");
  std::set<Natural> distinct;
  for (std::size_t i = 0; i < k; ++i) {
    if (!is_prime(seed_primes[i])) throw DomainError(to_string(seed_primes[i]) + " is not prime");
    if (seed_exponents[i] < 1) throw DomainError("negative_example_extend: exponents must be >= 1");
    if (!distinct.insert(seed_primes[i]).second) throw DomainError("negative_example_extend: repeated prime");
  }

  auto product = [&](Subset s) {
    Natural v = 1;
    for (unsigned i : s.indices()) v *= pow(seed_primes[i - 1], seed_exponents[i - 1]);
    return v;
  };
  Natural q = 0;
  auto absorb = [&q](const Integer& value) {
    if (value <= 1) return;
    const FactorMap f = factorize(value);
    q = std::max(q, std::prev(f.end())->first);
  };
  if (signs) {
    for (Subset s : seed_family.members()) absorb(product(s) - to_int((*signs)(s)));
  } else {
    if (k > kMaxEnumerableN) throw DomainError("negative_example_extend: k too large to enumerate");
    const std::uint64_t full = Subset::full(k).bits();
    for (std::uint64_t bits = 1; bits < full; ++bits) {
      const Natural v = product(Subset(bits));
      absorb(v - 1);
      absorb(v + 1);
    }
  }

  std::set<Natural> all = distinct;
  if (!fits_u64(q)) throw DomainError("negative_example_extend: greatest prime too large to extend to");
  for (std::uint64_t p : primes_up_to(to_u64(q))) all.insert(from_u64(p));
  std::vector<Natural> primes(all.begin(), all.end());

  std::vector<unsigned> position(k);
  std::vector<std::uint32_t> exponents(primes.size(), 1);
  for (unsigned i = 0; i < k; ++i) {
    const auto it = std::lower_bound(primes.begin(), primes.end(), seed_primes[i]);
    position[i] = static_cast<unsigned>(it - primes.begin()) + 1;
    exponents[position[i] - 1] = seed_exponents[i];
  }
  auto reindex = [&](Subset s) {
    std::vector<unsigned> idx;
    for (unsigned i : s.indices()) idx.push_back(position[i - 1]);
    return Subset::from_indices(idx);
  };
  const auto ell = static_cast<unsigned>(primes.size());
  if (ell > kMaxN) throw DomainError("negative_example_extend: more than 64 primes needed");
  std::vector<Subset> members;
  for (Subset s : seed_family.members()) members.push_back(reindex(s));
  SignAssignment extended_signs(signs ? signs->default_sign() : Sign::plus);
  if (signs) {
    for (const auto& [s, sign] : signs->overrides()) extended_signs.set(reindex(s), sign);
  }
  PrimePowerInstance inst(std::move(primes), std::move(exponents),
                          SubsetFamily::from_subsets(ell, std::move(members)), std::move(extended_signs));
  return {q, std::move(inst), std::move(position)};
}

// --- Relaxation scans ------------------------------------------------------

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Natural c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return fits_u64(c) ? to_u64(c) : std::numeric_limits<std::uint64_t>::max();
}

std::vector<Natural> scan_pool(const ScanConfig& c, unsigned n) {
  std::vector<Natural> pool;
  if (c.pool == PoolMode::smallest) {
    for (std::uint64_t p : first_primes(n)) pool.push_back(from_u64(p));
  } else {
    for (std::uint64_t p : primes_up_to(c.pool_bound)) pool.push_back(from_u64(p));
  }
  return pool;
}

void validate_scan(const ScanConfig& c) {
  if (c.n_min < 3 || c.n_max < c.n_min) throw DomainError("scan: need 3 <= n_min <= n_max");
  if (c.n_max > kMaxEnumerableN) throw DomainError("scan: n_max exceeds 24");
  if (c.exponent_bound < 1) throw DomainError("scan: exponent_bound must be >= 1");
  if (c.sizes.empty()) throw DomainError("scan: sizes must be nonempty");
  if (c.signs.empty()) throw DomainError("scan: at least one sign is required");
  for (unsigned n = c.n_min; n <= c.n_max; ++n) {
    for (unsigned s : c.sizes) {
      if (s < 1 || s > n - 1) {
        throw DomainError("scan: size " + std::to_string(s) + " outside [1, " + std::to_string(n - 1) +
                          "] for n = " + std::to_string(n));
      }
    }
  }
}

struct ScanItem {
  std::vector<Natural> primes;
  std::vector<std::uint32_t> exponents;
  Sign sign;
};

}  // namespace

std::uint64_t scan_instance_count(const ScanConfig& c) {
  std::uint64_t total = 0;
  for (unsigned n = c.n_min; n <= c.n_max; ++n) {
    const std::uint64_t pool =
        c.pool == PoolMode::smallest ? n : static_cast<std::uint64_t>(primes_up_to(c.pool_bound).size());
    std::uint64_t count = binomial(pool, n);
    for (unsigned i = 0; i < n; ++i) count = sat_mul(count, c.exponent_bound);
    total = sat_add(total, sat_mul(count, c.signs.size()));
  }
  return total;
}

ScanResult scan_relaxation(const ScanConfig& config) {
  validate_scan(config);
  const std::uint64_t required = scan_instance_count(config);
  if (required > config.budget) {
    throw BudgetExceeded("scan: " + std::to_string(required) + " instances exceed the budget of " +
                             std::to_string(config.budget),
                         required, config.budget);
  }

  constexpr std::size_t kBatch = 4096;
  ScanResult result;
  std::vector<ScanItem> batch;
  auto flush = [&](const SubsetFamily& family) {
    auto reports = parallel_map(batch.size(), config.threads, [&](std::size_t i) {
      PrimePowerInstance inst(batch[i].primes, batch[i].exponents, family, SignAssignment(batch[i].sign));
      WitnessReport report = witness_search(inst, 1);
      return std::make_pair(std::move(inst), std::move(report));
    });
    for (auto& [inst, report] : reports) {
      ++result.instances_checked;
      if (!report.found) result.absent.push_back({std::move(inst), std::move(report)});
    }
    batch.clear();
  };

  for (unsigned n = config.n_min; n <= config.n_max; ++n) {
    const SubsetFamily family = build_family(n, config.sizes);
    const std::vector<Natural> pool = scan_pool(config, n);
    if (pool.size() < n) continue;

    std::vector<std::size_t> pick(n);
    for (unsigned i = 0; i < n; ++i) pick[i] = i;
    for (;;) {
      std::vector<Natural> primes;
      for (std::size_t idx : pick) primes.push_back(pool[idx]);
      std::vector<std::uint32_t> exps(n, 1);
      for (;;) {
        for (Sign sign : config.signs) {
          batch.push_back({primes, exps, sign});
          if (batch.size() == kBatch) flush(family);
        }
        // Odometer over exponent tuples, last position fastest.
        std::size_t pos = n;
        while (pos > 0 && exps[pos - 1] == config.exponent_bound) exps[--pos] = 1;
        if (pos == 0) break;
        ++exps[pos - 1];
      }
      // Next increasing index tuple into the pool.
      std::size_t i = n;
      while (i > 0 && pick[i - 1] == pool.size() - n + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    flush(family);
  }
  return result;
}

// --- Lemma checkers --------------------------------------------------------

std::optional<AlphaSolution> alpha_decompose(const PrimePowerInstance& inst, Subset subset) {
  const unsigned n = inst.n();
  if (subset.empty() || subset.max_index() > n || subset == Subset::full(n)) {
    throw DomainError("alpha_decompose: {" + to_string(subset) + "} is not a nonempty proper subset");
  }
  const Subset rest = subset.complement(n);
  const Sign eps = inst.sign_of(rest);
  const Integer value = inst.subset_product(rest) - to_int(eps);
  const FactorMap f = factorize(value);

  AlphaSolution sol{subset, {}, eps};
  for (unsigned i : subset.indices()) sol.alpha[i] = 0;
  for (const auto& [p, e] : f) {
    bool placed = false;
    for (unsigned i : subset.indices()) {
      if (inst.primes()[i - 1] == p) {
        sol.alpha[i] = e;
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  return sol;
}

bool verify_alpha_solution(const PrimePowerInstance& inst, const AlphaSolution& sol) {
  const Subset rest = sol.subset.complement(inst.n());
  if (sol.complement_sign != inst.sign_of(rest)) return false;
  Natural prod = 1;
  for (const auto& [i, a] : sol.alpha) {
    if (!sol.subset.contains(i)) return false;
    prod *= pow(inst.primes()[i - 1], a);
  }
  return inst.subset_product(rest) == prod + to_int(sol.complement_sign);
}

std::optional<int> classify_expos_case(const Natural& p, std::uint32_t alpha, Sign eps) {
  if (p == 3) throw DomainError("classify_expos_case: p_j must differ from 3");
  if (!is_prime(p)) throw DomainError("classify_expos_case: " + to_string(p) + " is not prime");
  if (alpha < 1) throw DomainError("classify_expos_case: alpha must be >= 1");
  const Integer value = pow(p, alpha) + to_int(eps);
  if (!divides(Integer(3), value)) return std::nullopt;

  const bool even = alpha % 2 == 0;
  const unsigned long r6 = mpz_fdiv_ui(p.get_mpz_t(), 6);
  const unsigned long r3 = r6 % 3;
  const bool c1 = eps == Sign::minus && even;
  const bool c2 = eps == Sign::minus && !even && r6 == 1;
  const bool c3 = eps == Sign::plus && !even && r3 == 2;
  if (c1 + c2 + c3 != 1) {
    throw LemmaViolation("classify_expos_case: " + std::to_string(c1 + c2 + c3) + " cases hold for p = " +
                         to_string(p) + ", alpha = " + std::to_string(alpha));
  }
  return c1 ? 1 : c2 ? 2 : 3;
}

bool fermat_prime_check(const Natural& p) {
  if (!is_prime(p)) throw DomainError("fermat_prime_check: " + to_string(p) + " is not prime");
  const Natural m = p - 1;
  return m >= 2 && mpz_popcount(m.get_mpz_t()) == 1;
}

}  // namespace euclidlab
