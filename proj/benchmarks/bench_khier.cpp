#include <benchmark/benchmark.h>

#include <random>

#include "khier/generators.hpp"
#include "khier/hierarchy.hpp"
#include "khier/reduce.hpp"
#include "khier/verify.hpp"

using namespace khier;

namespace {

std::vector<int> random_tails(std::mt19937_64& rng, int k) {
  std::vector<int> t(k - 1);
  for (int j = 1; j <= k - 1; ++j) t[j - 1] = std::uniform_int_distribution<int>(j + 2, k + 1)(rng);
  return t;
}

void BM_ExponentsRecursion(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int k = int(state.range(0));
  auto t = random_tails(rng, k);
  for (auto _ : state) benchmark::DoNotOptimize(exponents_recursion(t, k));
}
BENCHMARK(BM_ExponentsRecursion)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_ExponentsFourierMotzkin(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int k = int(state.range(0));
  auto t = random_tails(rng, k);
  for (auto _ : state) benchmark::DoNotOptimize(exponents_fourier_motzkin(t, k));
}
BENCHMARK(BM_ExponentsFourierMotzkin)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Definiteness(benchmark::State& state) {
  const int n = int(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> d(-5, 5);
  SymMatrix<Real> M(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) M.set(i, j, Real(d(rng)));
  for (int i = 0; i < n; ++i) M.add(i, i, Real(6 * n));
  for (auto _ : state) benchmark::DoNotOptimize(definiteness(M));
}
BENCHMARK(BM_Definiteness)->Arg(4)->Arg(8)->Arg(16);

void BM_Analyze(benchmark::State& state) {
  SdpSystem s = gen_mild(int(state.range(0)));
  for (auto _ : state) {
    BlockPartition p = validate_regular(s);
    TailIndexVector t = tail_indices(s, p);
    benchmark::DoNotOptimize(derive_quadratics(s, p, t));
    benchmark::DoNotOptimize(exponents_recursion(t.t, p.k));
  }
}
BENCHMARK(BM_Analyze)->Arg(4)->Arg(8);

void BM_ConeAlternative(benchmark::State& state) {
  SdpSystem s = gen_khachiyan(int(state.range(0)));
  std::vector<SymMatrix<Rational>> span = s.A;
  for (auto _ : state) benchmark::DoNotOptimize(cone_alternative(span));
}
BENCHMARK(BM_ConeAlternative)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_FacialReduction(benchmark::State& state) {
  SdpSystem s = gen_mild(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(facial_reduction(s));
}
BENCHMARK(BM_FacialReduction)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_GreedyPoint(benchmark::State& state) {
  SdpSystem s = gen_khachiyan(int(state.range(0)));
  BlockPartition p = validate_regular(s);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_strict_point(s, p, Real(1000)));
}
BENCHMARK(BM_GreedyPoint)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  SdpSystem s = gen_mild(4);
  BlockPartition p = validate_regular(s);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_exponents(s, p, default_scales(), state.range(0) != 0));
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
