// Serial reference loops against the OpenMP drivers.

#include <benchmark/benchmark.h>

#include "relaynet/sim.hpp"

using namespace relaynet;

namespace {

SystemConfig direct_config() {
  SystemConfig cfg;
  cfg.noise_var = 1e-3;
  cfg.set_snr_db(10.0);
  return cfg;
}

SystemConfig relay_config() {
  SystemConfig cfg;
  cfg.rate = 6.0;
  cfg.retx_budget = 2;
  cfg.set_snr_db(10.0);
  return cfg;
}

void BM_DirectSerial(benchmark::State& state) {
  const SystemConfig cfg = direct_config();
  for (auto _ : state) benchmark::DoNotOptimize(simulate_direct_serial(cfg, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DirectParallel(benchmark::State& state) {
  const SystemConfig cfg = direct_config();
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_direct(cfg, state.range(0), 1, static_cast<int>(state.range(1))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RelaySerial(benchmark::State& state) {
  const SystemConfig cfg = relay_config();
  for (auto _ : state) benchmark::DoNotOptimize(simulate_relay_serial(cfg, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RelayParallel(benchmark::State& state) {
  const SystemConfig cfg = relay_config();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        simulate_relay(cfg, state.range(0), 1, {}, static_cast<int>(state.range(1))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_DirectSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirectParallel)->Args({100000, 1})->Args({100000, 2})->Args({100000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelaySerial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelayParallel)->Args({500, 1})->Args({500, 2})->Args({500, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
