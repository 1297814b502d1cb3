#include <benchmark/benchmark.h>

#include "zeno/models.hpp"
#include "zeno/sweep.hpp"

namespace {

void BM_LiouvillianAssembly(benchmark::State& state) {
  auto bundle = zeno::minimal_model(zeno::MinimalModelParams::fig4(static_cast<int>(state.range(0))), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(zeno::liouvillian_matrix(bundle.model));
}
BENCHMARK(BM_LiouvillianAssembly)->Arg(1)->Arg(2)->Arg(3);

void BM_Ness(benchmark::State& state) {
  auto bundle = zeno::minimal_model(zeno::MinimalModelParams::fig4(static_cast<int>(state.range(0))), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(zeno::ness(bundle.model));
}
BENCHMARK(BM_Ness)->Arg(1)->Arg(2)->Arg(3);

void BM_Spectrum(benchmark::State& state) {
  auto bundle = zeno::minimal_model(zeno::MinimalModelParams::fig4(static_cast<int>(state.range(0))), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(zeno::spectrum(bundle.model));
}
BENCHMARK(BM_Spectrum)->Arg(1)->Arg(2);

void BM_GammaChBell(benchmark::State& state) {
  auto bundle = zeno::bell3_model(1.0);
  auto crit = zeno::criterion(bundle);
  auto decomp = zeno::decompose(bundle, crit);
  for (auto _ : state) benchmark::DoNotOptimize(zeno::gamma_ch(bundle.model, decomp, crit));
}
BENCHMARK(BM_GammaChBell);

void BM_ExpansionHelix(benchmark::State& state) {
  auto bundle = zeno::helix_model({4, 1.3, 0.6}, 1.0);
  auto crit = zeno::criterion(bundle);
  auto decomp = zeno::decompose(bundle, crit);
  for (auto _ : state)
    benchmark::DoNotOptimize(zeno::expansion_terms(bundle.model, decomp, crit));
}
BENCHMARK(BM_ExpansionHelix);

}  // namespace

BENCHMARK_MAIN();
