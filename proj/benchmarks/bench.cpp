#include <benchmark/benchmark.h>

#include "tenet/granger.hpp"
#include "tenet/infotheory.hpp"
#include "tenet/synthetic.hpp"
#include "tenet/ultrametric.hpp"

using namespace tenet;

namespace {

ReturnPanel bench_panel(int n, int T) {
  VarSpec spec = VarSpec::zero(n, 1, T, 99);
  for (int i = 0; i + 1 < n; ++i) spec.coupling[0](i + 1, i) = 0.2;
  for (int i = 0; i < n; ++i) spec.coupling[0](i, i) = 0.2;
  return generate_var(spec);
}

void BM_ols_fit(benchmark::State& state) {
  const ReturnPanel panel = bench_panel(5, static_cast<int>(state.range(0)));
  const LagDesign design = build_lag_design(panel, "A", panel.labels, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ols_fit(design).residual_variance);
  }
}
BENCHMARK(BM_ols_fit)->Arg(1000)->Arg(10000);

void BM_causality_matrix(benchmark::State& state) {
  const ReturnPanel panel = bench_panel(static_cast<int>(state.range(0)), 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(causality_matrix(panel, 2, SigMethod::FTest, 42));
  }
}
BENCHMARK(BM_causality_matrix)->Arg(3)->Arg(6)->Arg(10);

void BM_discrete_te(benchmark::State& state) {
  const auto [x, y] = generate_copy_chain(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discrete_transfer_entropy(x, y, {}, 1).value);
  }
}
BENCHMARK(BM_discrete_te)->Arg(10000)->Arg(100000);

void BM_kruskal(benchmark::State& state) {
  const ReturnPanel panel = bench_panel(static_cast<int>(state.range(0)), 300);
  const DistanceMatrix dist = to_distance(correlation_matrix(panel));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kruskal_mst(dist).edges.size());
  }
}
BENCHMARK(BM_kruskal)->Arg(10)->Arg(50);

void BM_extract_tree(benchmark::State& state) {
  const ReturnPanel panel = bench_panel(static_cast<int>(state.range(0)), 1500);
  const CausalityMatrix matrix = causality_matrix(panel, 1, SigMethod::FTest, 42);
  const DirectedGraph graph = threshold_adjacency(matrix, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_causal_tree(graph).edges.size());
  }
}
BENCHMARK(BM_extract_tree)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
