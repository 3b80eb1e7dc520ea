#include <benchmark/benchmark.h>

#include <span>
#include <vector>

#include "kssim/grid.hpp"
#include "kssim/initial_data.hpp"
#include "kssim/model.hpp"
#include "kssim/solver.hpp"
#include "kssim/tridiagonal.hpp"

namespace {

kssim::Grid square(int dim, int n) {
  const double lengths[] = {1.0, 1.0};
  const int cells[] = {n, n};
  return kssim::build_grid(dim, std::span<const double>(lengths, dim), std::span<const int>(cells, dim));
}

kssim::ScalarField bump(const kssim::Grid& g) {
  kssim::InitSpec spec;
  spec.type = kssim::InitType::CosineBump;
  spec.amplitude = 0.8;
  return kssim::make_initial_u(g, spec);
}

kssim::ModelParams limited() {
  kssim::ModelParams p;
  p.p = 1.5;
  p.theta = 0.5;
  p.epsilon = 1e-3;
  return p;
}

void BM_Laplacian(benchmark::State& state) {
  const kssim::Grid g = square(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const kssim::ScalarField u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(kssim::laplacian(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}
BENCHMARK(BM_Laplacian)->Args({1, 1024})->Args({1, 16384})->Args({2, 128})->Args({2, 512});

void BM_Drift(benchmark::State& state) {
  const kssim::Grid g = square(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const kssim::VectorField gv = kssim::gradient_faces(kssim::make_initial_v(bump(g), 0.5));
  const kssim::ModelParams params = limited();
  for (auto _ : state) benchmark::DoNotOptimize(kssim::drift_velocity(gv, params));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.cell_count()));
}
BENCHMARK(BM_Drift)->Args({1, 1024})->Args({1, 16384})->Args({2, 128})->Args({2, 512});

void BM_Thomas(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const kssim::NeumannTridiagonal t(n, 2.5, 1.0);
  const std::vector<double> rhs(n, 1.0);
  std::vector<double> x(n);
  for (auto _ : state) {
    x = rhs;
    t.solve(x);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Thomas)->Arg(256)->Arg(4096)->Arg(65536);

void BM_StepImex(benchmark::State& state) {
  const kssim::Grid g = square(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const kssim::ModelParams params = limited();
  const kssim::ScalarField u0 = bump(g);
  const kssim::State s0(0.0, u0, kssim::make_initial_v(u0, params.theta));
  const double dt = kssim::stable_dt(s0, params, g, kssim::SolverConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(kssim::step_imex(s0, params, g, dt, 1e-12));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.cell_count()));
}
BENCHMARK(BM_StepImex)->Args({1, 256})->Args({1, 4096})->Args({2, 64})->Args({2, 256})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
