#include <benchmark/benchmark.h>

#include "supcogarch/charexp.hpp"
#include "supcogarch/cogarch.hpp"
#include "supcogarch/levy.hpp"
#include "supcogarch/montecarlo.hpp"
#include "supcogarch/price.hpp"
#include "supcogarch/supcogarch.hpp"

namespace sc = supcogarch;

namespace {

sc::SupModel two_atom() {
  return {sc::Mixture({{0.5, 0.6}, {0.2, 0.4}}), 1.0, 1.0, sc::LevyModel::compound_poisson(1.0)};
}

void BM_LevyCompoundPoisson(benchmark::State& state) {
  const auto model = sc::LevyModel::compound_poisson(1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sc::simulate_levy_path(model, {0.0, 1000.0}, seed++));
}
BENCHMARK(BM_LevyCompoundPoisson);

void BM_LevyVarianceGamma(benchmark::State& state) {
  const auto model = sc::LevyModel::variance_gamma(1.0, 1.0, 0.0, 1.0 / 256);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sc::simulate_levy_path(model, {0.0, 10.0}, seed++));
}
BENCHMARK(BM_LevyVarianceGamma);

void BM_Cogarch(benchmark::State& state) {
  const auto model = sc::LevyModel::compound_poisson(1.0);
  const auto s = sc::squared_jumps(sc::simulate_levy_path(model, {0.0, 1000.0}, 1));
  for (auto _ : state) benchmark::DoNotOptimize(sc::simulate_cogarch({1.0, 1.0, 0.5}, s, 2.0));
}
BENCHMARK(BM_Cogarch);

void BM_Superposition(benchmark::State& state) {
  const sc::SupSimulator sim(static_cast<sc::SupVariant>(state.range(0)), two_atom());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto bundle = sim.simulate({0.0, 1000.0}, seed++);
    benchmark::DoNotOptimize(sc::simulate_price(bundle));
  }
}
BENCHMARK(BM_Superposition)->Arg(0)->Arg(1)->Arg(2);

void BM_Replications(benchmark::State& state) {
  const sc::ReplicationSpec spec{sc::SupVariant::Sup2, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, 1.0, 0, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(sc::run_replications(two_atom(), spec, 1000, 1, 1));
}
BENCHMARK(BM_Replications)->Unit(benchmark::kMillisecond);

void BM_PsiQuadrature(benchmark::State& state) {
  const sc::ExponentContext ctx(sc::LevyModel::compound_poisson(1.0), 1.0);
  double u = 2.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc::psi(ctx, u, 0.5));
    u = u == 2.5 ? 2.6 : 2.5;
  }
}
BENCHMARK(BM_PsiQuadrature);

void BM_Kappa(benchmark::State& state) {
  const sc::ExponentContext ctx(sc::LevyModel::compound_poisson(1.0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sc::kappa_of_phi(ctx, 0.5));
}
BENCHMARK(BM_Kappa);

}  // namespace
BENCHMARK_MAIN();
