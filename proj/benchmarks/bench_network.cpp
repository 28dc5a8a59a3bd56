// End-to-end timing of a full Monte Carlo trial: clone, realize, configure,
// receive, and report on a two-pair network with interference-aware combining.

#include <string>

#include <benchmark/benchmark.h>

#include "mimosim/scenario.hpp"

namespace {

using namespace mimosim;

const char* const kScenario = R"json({
  "carrier_frequency_hz": 5.0e9,
  "symbol_bandwidth_hz": 50.0e6,
  "noise_psd_dbm_hz": -174.0,
  "num_streams": 2,
  "transmit_power_dbm": 0.0,
  "channel": {"model": "rayleigh"},
  "path_loss": {"model": "fspl", "path_loss_exponent": 2.0},
  "devices": [
    {"name": "tx-1", "capability": "transmitter", "coordinate": [0.0, 0.0, 0.0],
     "array": {"kind": "ula", "num_elements": 4}},
    {"name": "tx-2", "capability": "transmitter", "coordinate": [100.0, 0.0, 0.0],
     "array": {"kind": "ula", "num_elements": 4}},
    {"name": "rx-1", "capability": "receiver", "coordinate": [0.0, 100.0, 0.0],
     "array": {"kind": "ula", "num_elements": 8}},
    {"name": "rx-2", "capability": "receiver", "coordinate": [100.0, 100.0, 0.0],
     "array": {"kind": "ula", "num_elements": 8}}
  ],
  "pairs": [["tx-1", "rx-1"], ["tx-2", "rx-2"]],
  "strategies": {"transmitter": "eigen", "receiver": "mmse-int"},
  "run": {"trials": 1, "master_seed": 7}
})json";

void bench_single_trial(benchmark::State& state) {
  ScenarioConfig config = parse_scenario(kScenario);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.run.master_seed = seed++;
    auto records = run_monte_carlo(config);
    benchmark::DoNotOptimize(records.data());
  }
}

}  // namespace

BENCHMARK(bench_single_trial)->Unit(benchmark::kMicrosecond);
