#include <benchmark/benchmark.h>

#include <random>

#include "afem/adapt.hpp"
#include "afem/mesh.hpp"

using namespace afem;

static void BM_Mark(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::vector<double> eta(n);
  for (double& e : eta) e = value(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mark(eta, 0.4));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Mark)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);

static void BM_UniformBisect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mesh mesh = square_mesh({0, 1, 0, 1}, 1.0 / n, 1.0 / n);
  MarkedSet all;
  all.theta = 1.0;
  all.elements.resize(mesh.num_elements());
  for (int t = 0; t < mesh.num_elements(); ++t) all.elements[t] = t;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bisect(mesh, all));
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}
BENCHMARK(BM_UniformBisect)->Unit(benchmark::kMillisecond)->Arg(16)->Arg(64)->Arg(128);

static void BM_BuildFeMesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mesh mesh = square_mesh({0, 1, 0, 1}, 1.0 / n, 1.0 / n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_fe_mesh(mesh, {"x==1"}));
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}
BENCHMARK(BM_BuildFeMesh)->Unit(benchmark::kMillisecond)->Arg(16)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
