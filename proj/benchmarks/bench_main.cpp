#include <benchmark/benchmark.h>

#include "cosym/optimizer.hpp"
#include "cosym/random_fields.hpp"
#include "cosym/tensor_calculus.hpp"

using namespace cosym;

namespace {

const HyperbolicModel& cat() {
  static const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
  return m;
}

CosymplecticModel chart(int n) {
  return critical_metric(cat(), Grid::make(GridSpec::mapping_torus(n, n, cat().L)));
}

void partial_derivative_fiber(benchmark::State& state) {
  const CosymplecticModel m = chart(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(partial_derivative(m.metric.g(), axis_t));
  state.SetItemsProcessed(state.iterations() * m.metric.grid()->size());
}
BENCHMARK(partial_derivative_fiber)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void certify(benchmark::State& state) {
  const CosymplecticModel m = chart(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certify_compatible(m.structure, m.metric.g()));
  state.SetItemsProcessed(state.iterations() * m.metric.grid()->size());
}
BENCHMARK(certify)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void energy_functional(benchmark::State& state) {
  const CosymplecticModel m = chart(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(energy(m.metric.g(), m.structure));
  state.SetItemsProcessed(state.iterations() * m.metric.grid()->size());
}
BENCHMARK(energy_functional)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void optimizer_steps(benchmark::State& state) {
  const CosymplecticModel m = chart(static_cast<int>(state.range(0)));
  Rng rng(3);
  const Deformation d = random_deformation(m.metric.grid(), rng, 0.3);
  OptimizerOptions opt;
  opt.steps = 10;
  for (auto _ : state) benchmark::DoNotOptimize(minimize_energy(d, cat().mu(), m.structure, opt));
  state.SetItemsProcessed(state.iterations() * opt.steps);
}
BENCHMARK(optimizer_steps)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
