#include "euclidlab/closure.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "euclidlab/errors.hpp"
#include "euclidlab/json_io.hpp"
#include "euclidlab/montgomery.hpp"
#include "euclidlab/parallel.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"

namespace euclidlab {

namespace {

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  detail::u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

// Lexicographic successor of an increasing index vector over [0, n).
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

PrimePower as_prime_power(const Natural& value) {
  if (value < 2) throw DomainError("not a prime power: " + to_string(value));
  const FactorMap f = factorize(value);
  if (f.size() != 1) throw DomainError("not a prime power: " + to_string(value));
  return PrimePower{f.begin()->first, f.begin()->second};
}

ClosureState::ClosureState(std::vector<PrimePower> seed, Sign epsilon0) : epsilon0_(epsilon0) {
  if (seed.empty()) throw DomainError("closure seed is empty");
  std::set<Natural> bases;
  for (const auto& pp : seed) {
    if (pp.exponent < 1 || !is_prime(pp.prime)) {
      throw DomainError("closure seed element is not a prime power: " + to_string(pp.prime) + "^" +
                        std::to_string(pp.exponent));
    }
    if (!bases.insert(pp.prime).second) {
      throw DomainError("closure seed repeats the prime " + to_string(pp.prime));
    }
  }
  elements_ = std::move(seed);
  element_generation_.assign(elements_.size(), 0);
  bases_sorted_.assign(bases.begin(), bases.end());
}

std::vector<Natural> ClosureState::values() const {
  std::vector<Natural> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(e.value());
  return out;
}

bool ClosureState::covers(const Natural& prime) const {
  return std::binary_search(bases_sorted_.begin(), bases_sorted_.end(), prime);
}

std::size_t ClosureState::expanded_prefix(unsigned size) const {
  return size < expanded_prefix_.size() ? expanded_prefix_[size] : 0;
}

std::uint64_t pending_subset_count(const ClosureState& state, unsigned cap) {
  const std::size_t n = state.elements().size();
  std::uint64_t total = 0;
  for (unsigned s = 1; s <= cap && s < n; ++s) {
    const std::size_t m = state.expanded_prefix(s);
    std::uint64_t c = binomial_saturating(n, s);
    if (s < m) c -= binomial_saturating(m, s);
    total = add_saturating(total, c);
  }
  return total;
}

struct ClosureStepper {
  static ClosureState step(const ClosureState& state, const ClosureStepOptions& options) {
    if (options.cap < 1) throw DomainError("closure cap must be at least 1");
    const std::uint64_t pending = pending_subset_count(state, options.cap);
    if (pending > options.subset_budget) {
      throw BudgetExceeded("closure step needs " + std::to_string(pending) + " subsets, budget is " +
                               std::to_string(options.subset_budget),
                           pending, options.subset_budget);
    }

    const std::size_t n = state.elements_.size();
    const std::vector<Natural> values = state.values();

    std::vector<std::vector<std::size_t>> work;
    work.reserve(pending);
    for (unsigned s = 1; s <= options.cap && s < n; ++s) {
      const std::size_t m = state.expanded_prefix(s);
      std::vector<std::size_t> c(s);
      for (std::size_t i = 0; i < s; ++i) c[i] = i;
      do {
        if (s < m && c.back() < m) continue;
        work.push_back(c);
      } while (next_combination(c, n));
    }

    const long eps = to_int(state.epsilon0_);
    struct Outcome {
      Integer value;
      std::vector<Natural> primes;
    };
    auto outcomes = parallel_map(work.size(), options.threads, [&](std::size_t i) {
      Outcome o;
      o.value = 1;
      for (std::size_t idx : work[i]) o.value *= values[idx];
      o.value -= eps;
      if (options.element_bound) {
        for (std::uint64_t p : small_prime_factors(o.value, *options.element_bound)) o.primes.push_back(from_u64(p));
      } else {
        o.primes = factorize(o.value).primes();
      }
      return o;
    });

    ClosureState next = state;
    next.generation_ = state.generation_ + 1;
    std::map<Natural, Provenance> fresh;
    for (std::size_t i = 0; i < work.size(); ++i) {
      for (const auto& q : outcomes[i].primes) {
        if (state.covers(q) || fresh.count(q)) continue;
        fresh.emplace(q, Provenance{q, next.generation_, work[i], outcomes[i].value});
      }
    }
    for (auto& [q, prov] : fresh) {
      next.elements_.push_back(PrimePower{q, 1});
      next.element_generation_.push_back(next.generation_);
      next.provenance_.emplace(q, std::move(prov));
    }
    if (!fresh.empty()) {
      std::set<Natural> bases(next.bases_sorted_.begin(), next.bases_sorted_.end());
      for (const auto& [q, _] : fresh) bases.insert(q);
      next.bases_sorted_.assign(bases.begin(), bases.end());
    }
    if (next.expanded_prefix_.size() <= options.cap) next.expanded_prefix_.resize(options.cap + 1, 0);
    for (unsigned s = 1; s <= options.cap; ++s) next.expanded_prefix_[s] = n;
    return next;
  }
};

ClosureState closure_step(const ClosureState& state, const ClosureStepOptions& options) {
  return ClosureStepper::step(state, options);
}

const char* to_string(ClosureOutcome outcome) {
  switch (outcome) {
    case ClosureOutcome::covered: return "covered";
    case ClosureOutcome::stalled: return "stalled";
    case ClosureOutcome::step_budget_exhausted: return "step_budget_exhausted";
    case ClosureOutcome::subset_budget_exceeded: return "subset_budget_exceeded";
  }
  return "unknown";
}

ClosureRun closure_run(std::vector<PrimePower> seed, Sign epsilon0, std::uint64_t prime_bound,
                       const ClosureRunOptions& options) {
  ClosureRun run{ClosureState(std::move(seed), epsilon0), prime_bound, {}, {}, {}, ClosureOutcome::stalled};
  const std::vector<std::uint64_t> targets = primes_up_to(prime_bound);

  auto count_covered = [&](const ClosureState& s) {
    return static_cast<std::size_t>(
        std::count_if(targets.begin(), targets.end(), [&](std::uint64_t p) { return s.covers(from_u64(p)); }));
  };

  ClosureStepOptions step_options;
  step_options.cap = options.cap;
  step_options.element_bound = options.element_bound ? options.element_bound : std::optional(prime_bound);
  step_options.subset_budget = options.subset_budget;
  step_options.threads = options.threads;

  std::size_t covered = count_covered(run.state);
  for (;;) {
    if (covered == targets.size()) {
      run.outcome = ClosureOutcome::covered;
      break;
    }
    if (run.state.generation() >= options.max_generations) {
      run.outcome = ClosureOutcome::step_budget_exhausted;
      break;
    }
    GenerationSummary summary;
    try {
      summary.subsets_expanded = pending_subset_count(run.state, options.cap);
      ClosureState next = closure_step(run.state, step_options);
      const auto& elems = next.elements();
      for (std::size_t i = run.state.elements().size(); i < elems.size(); ++i) summary.added.push_back(elems[i].prime);
      run.state = std::move(next);
    } catch (const BudgetExceeded&) {
      run.outcome = ClosureOutcome::subset_budget_exceeded;
      break;
    }
    summary.generation = run.state.generation();
    covered = count_covered(run.state);
    summary.covered = covered;
    const bool stalled = summary.added.empty();
    run.generations.push_back(std::move(summary));
    // No new element means no new subsets: the state is a fixpoint.
    if (stalled && covered != targets.size()) {
      run.outcome = ClosureOutcome::stalled;
      break;
    }
  }
  for (std::uint64_t p : targets) {
    (run.state.covers(from_u64(p)) ? run.covered : run.uncovered).push_back(from_u64(p));
  }
  return run;
}

std::vector<Provenance> provenance_chain(const ClosureState& state, const Natural& prime) {
  if (!state.covers(prime)) throw DomainError(to_string(prime) + " is not in the closure");
  std::map<Natural, const Provenance*> seen;
  std::vector<Natural> stack{prime};
  while (!stack.empty()) {
    Natural q = stack.back();
    stack.pop_back();
    auto it = state.provenance().find(q);
    if (it == state.provenance().end() || seen.count(q)) continue;
    seen.emplace(q, &it->second);
    for (std::size_t idx : it->second.subset) stack.push_back(state.elements()[idx].prime);
  }
  std::vector<Provenance> chain;
  for (const auto& [_, p] : seen) chain.push_back(*p);
  std::sort(chain.begin(), chain.end(), [](const Provenance& a, const Provenance& b) {
    return a.generation != b.generation ? a.generation < b.generation : a.prime < b.prime;
  });
  return chain;
}

bool verify_provenance(const ClosureState& state) {
  const auto& elems = state.elements();
  const auto& gens = state.element_generations();
  for (const auto& [q, p] : state.provenance()) {
    if (p.subset.empty()) return false;
    Integer product = 1;
    for (std::size_t idx : p.subset) {
      // Every parent must predate the generation that produced q.
      if (idx >= elems.size() || gens[idx] >= p.generation) return false;
      product *= elems[idx].value();
    }
    if (product - to_int(state.epsilon0()) != p.value) return false;
    if (!divides(q, p.value) || !is_prime(q)) return false;
  }
  return true;
}

nlohmann::json to_json_value(const Provenance& p, const ClosureState& state) {
  std::vector<Natural> subset;
  for (std::size_t idx : p.subset) subset.push_back(state.elements()[idx].value());
  return {{"prime", to_json_value(p.prime)},
          {"generation", p.generation},
          {"subset", to_json_value(subset)},
          {"value", to_json_value(p.value)}};
}

nlohmann::json to_json_value(const ClosureRun& run) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : run.generations) {
    gens.push_back({{"generation", g.generation},
                    {"added", to_json_value(g.added)},
                    {"subsets_expanded", g.subsets_expanded},
                    {"covered", g.covered}});
  }
  nlohmann::json elements = nlohmann::json::array();
  for (std::size_t i = 0; i < run.state.elements().size(); ++i) {
    const auto& e = run.state.elements()[i];
    elements.push_back({{"prime", to_json_value(e.prime)},
                        {"exponent", e.exponent},
                        {"generation", run.state.element_generations()[i]}});
  }
  nlohmann::json provenance = nlohmann::json::array();
  for (const auto& [_, p] : run.state.provenance()) provenance.push_back(to_json_value(p, run.state));
  return {{"epsilon0", to_int(run.state.epsilon0())},
          {"prime_bound", run.prime_bound},
          {"provenance", std::move(provenance)},
          {"outcome", to_string(run.outcome)},
          {"generations", std::move(gens)},
          {"elements", std::move(elements)},
          {"covered", run.covered.size()},
          {"uncovered", to_json_value(run.uncovered)}};
}

ResiduePartition partition_by_residue(std::span<const Natural> elements, std::uint64_t p,
                                      std::optional<std::size_t> threshold) {
  if (p < 2 || !is_prime_u64(p)) throw DomainError("residue modulus must be prime: " + std::to_string(p));
  ResiduePartition out;
  out.modulus = p;
  out.threshold = threshold ? *threshold : static_cast<std::size_t>(2 * (p - 1));
  out.classes.resize(p);
  for (const auto& a : elements) {
    const std::uint64_t r = mpz_fdiv_ui(a.get_mpz_t(), p);
    if (r != 0) out.classes[r].push_back(a);
  }
  for (std::uint64_t r = 1; r < p; ++r) {
    (out.classes[r].size() > out.threshold ? out.infinite_classes : out.finite_classes).push_back(r);
  }
  return out;
}

std::optional<WitnessSubset> witness_subset_for_prime(std::span<const Natural> elements, std::uint64_t p) {
  if (p < 2 || !is_prime_u64(p)) throw DomainError("witness subset needs a prime: " + std::to_string(p));
  for (const auto& a : elements) {
    if (mpz_fdiv_ui(a.get_mpz_t(), p) == 0) {
      throw DomainError(std::to_string(p) + " divides the element " + to_string(a));
    }
  }
  const ResiduePartition part = partition_by_residue(elements, p, std::nullopt);
  for (std::uint64_t r = 1; r < p; ++r) {
    const auto& cls = part.classes[r];
    if (cls.size() < p - 1) continue;
    return WitnessSubset{r, std::vector<Natural>(cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(p - 1))};
  }
  return std::nullopt;
}

const char* to_string(RhoChainStatus status) {
  switch (status) {
    case RhoChainStatus::divisible_by_target: return "divisible_by_target";
    case RhoChainStatus::reached_max_n: return "reached_max_n";
    case RhoChainStatus::factor_outside_set: return "factor_outside_set";
    case RhoChainStatus::class_exhausted: return "class_exhausted";
    case RhoChainStatus::no_infinite_class: return "no_infinite_class";
    case RhoChainStatus::size_limit: return "size_limit";
  }
  return "unknown";
}

RhoChain rho_chain_build(std::span<const Natural> primes, std::uint64_t p, const RhoChainOptions& options) {
  std::vector<Natural> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DomainError("repeated element");
  for (const auto& q : sorted) {
    if (!is_prime(q)) throw DomainError("rho chain needs a set of primes; got " + to_string(q));
    if (q == p) throw DomainError("the target prime must not belong to the set");
  }

  RhoChain chain;
  chain.target = p;
  chain.partition = partition_by_residue(sorted, p, options.threshold);
  const auto& part = chain.partition;

  std::vector<Natural> fin;
  for (std::uint64_t r : part.finite_classes) fin.insert(fin.end(), part.classes[r].begin(), part.classes[r].end());
  std::sort(fin.begin(), fin.end());
  for (const auto& a : fin) chain.xi0 *= a;

  Natural a0;
  bool have_a0 = false;
  for (std::uint64_t r : part.infinite_classes) {
    const Natural& smallest = part.classes[r].front();  // classes inherit ascending order
    if (!have_a0 || smallest < a0) a0 = smallest, have_a0 = true;
  }
  if (!have_a0) {
    chain.status = RhoChainStatus::no_infinite_class;
    return chain;
  }
  chain.a0 = a0;
  const Natural rho0 = a0 * chain.xi0;
  std::vector<Natural> base_factors = fin;
  base_factors.push_back(a0);
  std::sort(base_factors.begin(), base_factors.end());
  chain.rhos.push_back(rho0);
  chain.rho_factors.push_back(base_factors);

  const std::uint32_t max_n = options.max_n ? *options.max_n : static_cast<std::uint32_t>(p * (p - 1) - 2);
  for (std::uint32_t n = 0;; ++n) {
    const Natural next = chain.rhos.back() + 1;
    if (mpz_fdiv_ui(next.get_mpz_t(), p) == 0) {
      chain.status = RhoChainStatus::divisible_by_target;
      return chain;
    }
    if (n >= max_n) {
      chain.status = RhoChainStatus::reached_max_n;
      return chain;
    }
    if (bit_length(next) > options.max_bits) {
      chain.status = RhoChainStatus::size_limit;
      return chain;
    }
    const FactorMap f = factorize(next);
    std::vector<Natural> chosen;
    for (const auto& [q, s] : f) {
      if (!std::binary_search(sorted.begin(), sorted.end(), q)) {
        chain.status = RhoChainStatus::factor_outside_set;
        return chain;
      }
      const auto& cls = part.classes[mpz_fdiv_ui(q.get_mpz_t(), p)];
      std::uint32_t need = s;
      for (const auto& a : cls) {
        if (need == 0) break;
        if (a > rho0 && std::find(chosen.begin(), chosen.end(), a) == chosen.end()) {
          chosen.push_back(a);
          --need;
        }
      }
      if (need != 0) {
        chain.status = RhoChainStatus::class_exhausted;
        return chain;
      }
    }
    Natural rho = rho0;
    for (const auto& a : chosen) rho *= a;
    std::vector<Natural> factors = base_factors;
    factors.insert(factors.end(), chosen.begin(), chosen.end());
    std::sort(factors.begin(), factors.end());
    chain.rhos.push_back(rho);
    chain.rho_factors.push_back(std::move(factors));
  }
}

bool verify_rho_chain(const RhoChain& chain, std::span<const Natural> primes) {
  if (chain.rhos.size() != chain.rho_factors.size()) return false;
  if (chain.rhos.empty()) return true;
  std::vector<Natural> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t p = chain.target;
  const std::uint64_t r0 = mpz_fdiv_ui(chain.rhos.front().get_mpz_t(), p);
  // sum_{i=0}^{n+1} rho_0^i mod p, advanced one term per link.
  std::uint64_t power = r0;  // rho_0^{n+1}
  std::uint64_t sum = (1 + r0) % p;
  for (std::size_t n = 0; n < chain.rhos.size(); ++n) {
    const Natural& rho = chain.rhos[n];
    if (!divides(chain.xi0, rho)) return false;
    const Natural one_plus = rho + 1;
    if (mpz_fdiv_ui(one_plus.get_mpz_t(), p) != sum) return false;
    const auto& fs = chain.rho_factors[n];
    Natural product = 1;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i > 0 && fs[i] == fs[i - 1]) return false;
      if (!std::binary_search(sorted.begin(), sorted.end(), fs[i])) return false;
      product *= fs[i];
    }
    if (product != rho) return false;
    power = static_cast<std::uint64_t>((static_cast<detail::u128>(power) * r0) % p);
    sum = (sum + power) % p;
  }
  return true;
}

nlohmann::json to_json_value(const RhoChain& chain) {
  nlohmann::json finite = nlohmann::json::array(), infinite = nlohmann::json::array();
  for (auto r : chain.partition.finite_classes) finite.push_back(r);
  for (auto r : chain.partition.infinite_classes) infinite.push_back(r);
  nlohmann::json links = nlohmann::json::array();
  for (std::size_t n = 0; n < chain.rhos.size(); ++n) {
    links.push_back({{"n", n}, {"rho", to_json_value(chain.rhos[n])}, {"factors", to_json_value(chain.rho_factors[n])}});
  }
  return {{"target", chain.target},
          {"threshold", chain.partition.threshold},
          {"finite_classes", std::move(finite)},
          {"infinite_classes", std::move(infinite)},
          {"xi0", to_json_value(chain.xi0)},
          {"a0", chain.a0 ? to_json_value(*chain.a0) : nlohmann::json(nullptr)},
          {"links", std::move(links)},
          {"status", to_string(chain.status)}};
}

}  // namespace euclidlab
