// Serial reference vs OpenMP kernels.
#include "omin/analysis.hpp"
#include "omin/conflict.hpp"

#include <benchmark/benchmark.h>

using namespace omin;

namespace {

const std::vector<CrosstalkMode> kModes{CrosstalkMode::allow(), CrosstalkMode::budget(1),
                                        CrosstalkMode::free()};

SimOptions options(int threads) {
  SimOptions o;
  o.trials = 20000;
  o.seed = 1;
  o.exec.threads = threads;
  return o;
}

void BM_MonteCarloSerial(benchmark::State &state) {
  const auto net = build_network(static_cast<std::uint32_t>(state.range(0)), Topology::Omega);
  const auto opts = options(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo_serial(net, TrafficModel{}, kModes, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.trials));
}

void BM_MonteCarloParallel(benchmark::State &state) {
  const auto net = build_network(static_cast<std::uint32_t>(state.range(0)), Topology::Omega);
  const auto opts = options(static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo(net, TrafficModel{}, kModes, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.trials));
}

void BM_ConflictGraphSerial(benchmark::State &state) {
  const auto size = static_cast<std::uint32_t>(state.range(0));
  const auto net = build_network(size, Topology::Omega);
  rng::Stream stream(5);
  const auto perm = generate_random_permutation(size, stream);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_conflict_graph_serial(net, perm));
}

void BM_ConflictGraphParallel(benchmark::State &state) {
  const auto size = static_cast<std::uint32_t>(state.range(0));
  const auto net = build_network(size, Topology::Omega);
  rng::Stream stream(5);
  const auto perm = generate_random_permutation(size, stream);
  const ExecPolicy exec{static_cast<int>(state.range(1))};
  for (auto _ : state)
    benchmark::DoNotOptimize(build_conflict_graph(net, perm, exec));
}

} // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)
    ->ArgsProduct({{16, 64}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConflictGraphSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConflictGraphParallel)
    ->ArgsProduct({{256, 1024}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
