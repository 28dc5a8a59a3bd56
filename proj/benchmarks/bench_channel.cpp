// Timings for single channel realizations across models and array sizes.

#include <benchmark/benchmark.h>

#include "mimosim/channel.hpp"

namespace {

using namespace mimosim;

PropagationContext square_context(int n) {
  PropagationContext ctx;
  ctx.carrier_frequency_hz = 5e9;
  ctx.tx_array = make_ula(n);
  ctx.rx_array = make_ula(n);
  ctx.rx_origin = Eigen::Vector3d(0.0, 50.0, 0.0);
  return ctx;
}

void bench_model(benchmark::State& state, ChannelModel model) {
  const int n = static_cast<int>(state.range(0));
  PropagationContext ctx = square_context(n);

  ChannelSpec spec;
  spec.model = model;
  spec.rician_kappa = 4.0;
  spec.num_clusters = 4;
  spec.num_rays = 8;

  RandomStream rng(0x5eed);
  for (auto _ : state) {
    ChannelRealization h = realize_channel(spec, ctx, rng);
    benchmark::DoNotOptimize(h.matrix.data());
    benchmark::DoNotOptimize(h.energy);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bench_model, rayleigh, ChannelModel::Rayleigh)
    ->Arg(4)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_model, los, ChannelModel::Los)
    ->Arg(4)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_model, rician, ChannelModel::Rician)
    ->Arg(4)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_model, ray_cluster, ChannelModel::RayCluster)
    ->Arg(4)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_model, spherical, ChannelModel::SphericalWave)
    ->Arg(4)->Arg(16)->Arg(64);
