#include <benchmark/benchmark.h>

#include "weakmeas/protocols.hpp"
#include "weakmeas/unsharp.hpp"

using namespace weakmeas;

namespace {

ExperimentConfig chain(std::size_t steps, std::uint64_t trials) {
  ExperimentConfig cfg;
  cfg.pre = states::x_plus();
  for (std::size_t j = 0; j < steps; ++j) {
    const BlochDirection dir = j % 2 ? BlochDirection::X() : BlochDirection::Z();
    cfg.steps.push_back(WeakStep{dir, UnsharpCoupling::from_strength(0.3)});
  }
  cfg.trials = trials;
  return cfg;
}

void BM_Couple(benchmark::State& state) {
  const UnsharpCoupling c(0.8, 0.6);
  const Operator z = pauli_z();
  for (auto _ : state) benchmark::DoNotOptimize(couple(states::x_plus(), z, c));
}
BENCHMARK(BM_Couple);

void BM_RunPointerFirst(benchmark::State& state) {
  const ExperimentConfig cfg = chain(static_cast<std::size_t>(state.range(0)), 10000);
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_RunPointerFirst)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_RunPostselectFirst(benchmark::State& state) {
  ExperimentConfig cfg = chain(static_cast<std::size_t>(state.range(0)), 10000);
  cfg.order = Order::PostselectFirst;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_RunPostselectFirst)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ExactDistribution(benchmark::State& state) {
  const ExperimentConfig cfg = chain(static_cast<std::size_t>(state.range(0)), 1);
  const auto order = state.range(1) == 0 ? Order::PointerFirst : Order::PostselectFirst;
  for (auto _ : state) benchmark::DoNotOptimize(exact_distribution(cfg, order));
}
BENCHMARK(BM_ExactDistribution)->ArgsProduct({{3, 8, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
