#include <benchmark/benchmark.h>

#include <cmath>

#include "feig/dimension.hpp"
#include "feig/feigenbaum_map.hpp"
#include "feig/ifs.hpp"
#include "feig/inverse_branch.hpp"
#include "feig/partition.hpp"

namespace {

const feig::Ifs& shared_ifs() {
  static const feig::Ifs ifs = [] {
    const feig::InverseBranch ib(feig::solve_feigenbaum(2, 40, 1e-12));
    return feig::Ifs(ib, feig::find_c(ib));
  }();
  return ifs;
}

void BM_Solve(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(feig::solve_feigenbaum(2, order, 1e-12));
}
BENCHMARK(BM_Solve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_GContinued(benchmark::State& state) {
  const auto& map = shared_ifs().branch().map();
  const feig::cplx z(2.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(map.g(z));
}
BENCHMARK(BM_GContinued);

void BM_InverseBranch(benchmark::State& state) {
  const auto& ib = shared_ifs().branch();
  const feig::cplx z(-1.7, 2.3);
  for (auto _ : state) benchmark::DoNotOptimize(ib.u_jet(z));
}
BENCHMARK(BM_InverseBranch);

void BM_PhiJet(benchmark::State& state) {
  const auto& ifs = shared_ifs();
  const int i = static_cast<int>(state.range(0));
  const feig::cplx z(1.0, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(ifs.phi_jet(i, z));
}
BENCHMARK(BM_PhiJet)->DenseRange(1, 3);

void BM_LimitCurve(benchmark::State& state) {
  const auto& ifs = shared_ifs();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(feig::limit_curve(ifs, depth));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(std::pow(3, depth)));
}
BENCHMARK(BM_LimitCurve)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_WordTree(benchmark::State& state) {
  const auto& ifs = shared_ifs();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(feig::WordTree(ifs, {0.39, 1.57}, depth, 0));
}
BENCHMARK(BM_WordTree)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_NormalizedRoot(benchmark::State& state) {
  static const feig::WordTree tree(shared_ifs(), {0.39, 1.57}, 10, 0);
  for (auto _ : state) benchmark::DoNotOptimize(feig::normalized_root(tree, 10));
}
BENCHMARK(BM_NormalizedRoot)->Unit(benchmark::kMillisecond);

void BM_Locate(benchmark::State& state) {
  static const feig::Partition part(shared_ifs());
  part.machine();
  const feig::cplx z(0.13, 0.07);
  for (auto _ : state) benchmark::DoNotOptimize(part.locate(z));
}
BENCHMARK(BM_Locate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
