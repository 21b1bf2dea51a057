#include <benchmark/benchmark.h>

#include "euclidlab/closure.hpp"
#include "euclidlab/factor.hpp"
#include "euclidlab/primality.hpp"
#include "euclidlab/sieve.hpp"
#include "euclidlab/witness.hpp"

using namespace euclidlab;

static void BM_IsPrimeU64(benchmark::State& state) {
  std::uint64_t n = 1'000'000'000'000'000'003ull;
  for (auto _ : state) benchmark::DoNotOptimize(is_prime_u64(n += 2));
}
BENCHMARK(BM_IsPrimeU64);

static void BM_IsPrimeBig(benchmark::State& state) {
  Natural n = pow(Natural(2), static_cast<unsigned long>(state.range(0))) + 1;
  for (auto _ : state) {
    n += 2;
    benchmark::DoNotOptimize(is_prime(n));
  }
}
BENCHMARK(BM_IsPrimeBig)->Arg(128)->Arg(512);

static void BM_FactorizeSemiprime(benchmark::State& state) {
  const Natural m = Natural(1000000007) * Natural(998244353);
  for (auto _ : state) benchmark::DoNotOptimize(factorize(m));
}
BENCHMARK(BM_FactorizeSemiprime);

static void BM_FactorizeMersenneLike(benchmark::State& state) {
  const Natural m = pow(Natural(3), 40) - 1;
  for (auto _ : state) benchmark::DoNotOptimize(factorize(m));
}
BENCHMARK(BM_FactorizeMersenneLike);

static void BM_Sieve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(primes_up_to(static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_Sieve)->Arg(1'000'000)->Arg(10'000'000);

static void BM_WitnessSearchAbsent(benchmark::State& state) {
  std::vector<Natural> primes;
  for (std::uint64_t p : first_primes(static_cast<std::size_t>(state.range(0)))) primes.push_back(from_u64(p));
  const auto n = static_cast<unsigned>(primes.size());
  const PrimePowerInstance inst(primes, std::vector<std::uint32_t>(n, 1), build_family(n, {1}), SignAssignment());
  for (auto _ : state) benchmark::DoNotOptimize(witness_search(inst));
}
BENCHMARK(BM_WitnessSearchAbsent)->Arg(10)->Arg(20);

static void BM_ClosureStep(benchmark::State& state) {
  const auto run = closure_run({{2, 1}, {3, 1}, {5, 1}}, Sign::minus, 100);
  ClosureStepOptions opt;
  opt.cap = static_cast<unsigned>(state.range(0));
  opt.element_bound = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(closure_step(run.state, opt));
}
BENCHMARK(BM_ClosureStep)->Arg(2)->Arg(3);
BENCHMARK_MAIN();
