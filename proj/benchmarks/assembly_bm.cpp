#include <benchmark/benchmark.h>

#include "afem/assembly.hpp"
#include "afem/driver.hpp"
#include "afem/estimator.hpp"
#include "afem/quadrature.hpp"

using namespace afem;

static void BM_AssembleStiffness(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 1.0 / 64, 1.0 / 64));
  const FeSpace space = build_dof_map(fe, degree);
  const int quad_order = default_quad_order(degree);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, quad_order));
  }
  state.SetItemsProcessed(state.iterations() * fe.num_elements());
}
BENCHMARK(BM_AssembleStiffness)->Unit(benchmark::kMillisecond)->Arg(1)->Arg(2)->Arg(3);

static void BM_PoissonSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PdeData pde = benchmark_sin();
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 1.0 / n, 1.0 / n));
  const FeSpace space = build_dof_map(fe, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_poisson(fe, pde, space, 3));
  }
}
BENCHMARK(BM_PoissonSolve)->Unit(benchmark::kMillisecond)->Arg(32)->Arg(64)->Arg(128);

static void BM_Indicator(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const PdeData pde = benchmark_gaussian_bump();
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 1.0 / 64, 1.0 / 64));
  const FeSpace space = build_dof_map(fe, degree);
  const int quad_order = default_quad_order(degree);
  const std::vector<double> uh = solve_poisson(fe, pde, space, quad_order);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        indicator(fe, space, uh, CoefSource(pde.f), quad_order, false));
  }
  state.SetItemsProcessed(state.iterations() * fe.num_elements());
}
BENCHMARK(BM_Indicator)->Unit(benchmark::kMillisecond)->Arg(1)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
