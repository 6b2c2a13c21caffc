// Microbenchmarks for the hot paths: phi evaluation, the individual block
// updates, and a whole dlADMM iteration at a few widths.

#include <benchmark/benchmark.h>

#include <random>

#include "dladmm/trainer.hpp"

using namespace dladmm;

namespace {

struct Fixture {
  Architecture arch;
  Dataset data;
  NetState state;
  Hyperparams hyper;

  Fixture(int hidden, int samples) {
    arch.layer_dims = {784, hidden, hidden, 10};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    data.x.resize(784, samples);
    data.y = Matrix::Zero(10, samples);
    for (int j = 0; j < samples; ++j) {
      for (int i = 0; i < 784; ++i) data.x(i, j) = unif(rng);
      data.y(j % 10, j) = 1.0;
    }
    hyper.rho0 = 1.0;
    state = init_state(arch, data, hyper);
  }
};

void BM_PhiValue(benchmark::State& bm) {
  Fixture f(int(bm.range(0)), 1000);
  for (auto _ : bm)
    benchmark::DoNotOptimize(
        phi_value(f.state, f.data.x, f.arch.activation, f.hyper.nu, 1.0));
}
BENCHMARK(BM_PhiValue)->Arg(100)->Arg(400);

void BM_UpdateW(benchmark::State& bm) {
  Fixture f(int(bm.range(0)), 1000);
  for (auto _ : bm)
    update_W_backtrack(f.state, f.data.x, 1, f.hyper.nu, 1.0, 1e-3, 2.0,
                       RegularizerSpec{});
}
BENCHMARK(BM_UpdateW)->Arg(100)->Arg(400);

void BM_UpdateZHidden(benchmark::State& bm) {
  Fixture f(int(bm.range(0)), 1000);
  for (auto _ : bm)
    update_z_hidden(f.state, f.data.x, f.arch.activation, 0);
}
BENCHMARK(BM_UpdateZHidden)->Arg(100)->Arg(400);

void BM_OutputFista(benchmark::State& bm) {
  Fixture f(100, int(bm.range(0)));
  for (auto _ : bm)
    update_z_output_fista(f.state, f.data.x, f.data.y, RiskSpec{}, 1.0, 20,
                          1e-8);
}
BENCHMARK(BM_OutputFista)->Arg(1000)->Arg(4000);

void BM_FullIteration(benchmark::State& bm) {
  Fixture f(int(bm.range(0)), 1000);
  Trainer trainer(f.arch, f.hyper, RiskSpec{});
  int k = 0;
  for (auto _ : bm) trainer.iterate(f.state, f.data, nullptr, k++);
}
BENCHMARK(BM_FullIteration)->Arg(50)->Arg(100)->Arg(200)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
