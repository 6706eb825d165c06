#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "pbdstein/coupling.hpp"
#include "pbdstein/metrics.hpp"
#include "pbdstein/pmf.hpp"
#include "pbdstein/profile.hpp"
#include "pbdstein/rates.hpp"
#include "pbdstein/stein.hpp"

using namespace pbdstein;

namespace {

void bm_equilibrium(benchmark::State& state) {
  const PBDParams params(static_cast<double>(state.range(0)), 1.0);
  for (auto _ : state) {
    TruncatedPmf pmf = pbd_equilibrium(params, 1e-12);
    benchmark::DoNotOptimize(pmf.probs.data());
  }
}
BENCHMARK(bm_equilibrium)->Arg(1)->Arg(10)->Arg(100);

void bm_stein_solve(benchmark::State& state) {
  const PBDParams params(static_cast<double>(state.range(0)), 1.0);
  const TruncatedPmf pmf = pbd_equilibrium(params, 1e-12);
  const auto f = [](std::int64_t k) { return -static_cast<double>(k); };
  for (auto _ : state) {
    SteinSolution sol = stein_solve(params, pmf, f);
    benchmark::DoNotOptimize(sol.g.data());
  }
}
BENCHMARK(bm_stein_solve)->Arg(1)->Arg(10)->Arg(100);

void bm_sup_delta_g(benchmark::State& state) {
  const PBDParams params(static_cast<double>(state.range(0)), 1.0);
  const TruncatedPmf pmf = pbd_equilibrium(params, 1e-12);
  for (auto _ : state) {
    SupremumResult sup = exact_sup_delta_g(params, pmf);
    benchmark::DoNotOptimize(sup.value);
  }
}
BENCHMARK(bm_sup_delta_g)->Arg(1)->Arg(10)->Arg(50);

void bm_exact_pmf(benchmark::State& state) {
  const BernoulliProfile profile(
      std::vector<double>(static_cast<std::size_t>(state.range(0)), 0.1));
  for (auto _ : state) {
    TruncatedPmf pmf = exact_pmf(profile);
    benchmark::DoNotOptimize(pmf.probs.data());
  }
}
BENCHMARK(bm_exact_pmf)->Arg(50)->Arg(200)->Arg(1000);

void bm_wasserstein(benchmark::State& state) {
  const TruncatedPmf p = poisson_pmf(static_cast<double>(state.range(0)), 1e-12);
  const TruncatedPmf q = poisson_pmf(static_cast<double>(state.range(0)) + 0.5, 1e-12);
  for (auto _ : state) {
    DistanceResult d = wasserstein(p, q);
    benchmark::DoNotOptimize(d.value);
  }
}
BENCHMARK(bm_wasserstein)->Arg(5)->Arg(50);

void bm_vacancy_time(benchmark::State& state) {
  const PBDParams params(1.0, 1.0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_vacancy_time(params, 1, seed++));
  }
}
BENCHMARK(bm_vacancy_time);

}  // namespace

BENCHMARK_MAIN();
