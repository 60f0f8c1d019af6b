// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "trecdsa/kernels.hpp"

namespace trecdsa {
namespace {

struct PowModInputs {
  std::vector<mpz_class> bases;
  std::vector<mpz_class> exps;
  mpz_class modulus;
};

PowModInputs MakeInputs(std::size_t count, std::size_t bits) {
  Rng rng = Rng::FromSeed(std::uint64_t{9});
  PowModInputs in;
  in.modulus = rng.Bits(bits) | 1;
  for (std::size_t i = 0; i < count; ++i) {
    in.bases.push_back(rng.Below(in.modulus));
    in.exps.push_back(rng.Bits(bits));
  }
  return in;
}

void BM_BatchPowModParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const PowModInputs in = MakeInputs(64, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::BatchPowMod(in.bases, in.exps, in.modulus));
  }
}

void BM_BatchPowModSerial(benchmark::State& state) {
  const PowModInputs in = MakeInputs(64, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::BatchPowMod(in.bases, in.exps, in.modulus));
  }
}

void BM_GeneratePrimeParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  Rng rng = Rng::FromSeed(std::uint64_t{10});
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::GeneratePrime(static_cast<std::size_t>(state.range(0)),
                                                    kernels::PrimeKind::kPrime, rng));
  }
}

void BM_GeneratePrimeSerial(benchmark::State& state) {
  Rng rng = Rng::FromSeed(std::uint64_t{10});
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::GeneratePrime(
        static_cast<std::size_t>(state.range(0)), kernels::PrimeKind::kPrime, rng));
  }
}

// Wall time: CPU time only counts the calling thread.
BENCHMARK(BM_BatchPowModParallel)
    ->ArgsProduct({{1024, 2048}, {1, 2, 4}})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchPowModSerial)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneratePrimeParallel)
    ->ArgsProduct({{1024}, {1, 2, 4}})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneratePrimeSerial)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trecdsa

BENCHMARK_MAIN();
