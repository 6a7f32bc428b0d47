#include <benchmark/benchmark.h>

#include "sdg/dp_solver.hpp"
#include "sdg/instances.hpp"
#include "sdg/oracle.hpp"
#include "sdg/vc_solver.hpp"

namespace {

void BM_OracleRingFixture(benchmark::State& state) {
  sdg::Fixture f = sdg::make_ring_fixture();
  auto mode = static_cast<sdg::SolveMode>(state.range(0));
  for (auto _ : state) {
    auto r = sdg::solve_exact(f.instance, mode);
    benchmark::DoNotOptimize(r.welfare);
  }
}
BENCHMARK(BM_OracleRingFixture)->Arg(0)->Arg(1)->Arg(2);

void BM_DpCappedKTree(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sdg::Instance inst =
      sdg::random_ktree(n, 3, 12345, sdg::ScoringVector({1, -1}));
  sdg::NiceTreeDecomposition dec = sdg::build_nice_decomposition(inst);
  sdg::DpOptions opts;
  opts.size_cap = 3;
  for (auto _ : state) {
    auto r = sdg::solve_dp(inst, sdg::SolveMode::WF, dec, opts);
    benchmark::DoNotOptimize(r.welfare);
  }
}
BENCHMARK(BM_DpCappedKTree)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_VcStar(benchmark::State& state) {
  const int leaves = static_cast<int>(state.range(0));
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  sdg::Instance star(leaves + 1, std::move(edges), sdg::ScoringVector({1, -1}));
  for (auto _ : state) {
    auto r = sdg::solve_vc(star, sdg::SolveMode::WF);
    benchmark::DoNotOptimize(r.welfare);
  }
}
BENCHMARK(BM_VcStar)->Arg(12)->Arg(20);

void BM_TreewidthDecomposition(benchmark::State& state) {
  sdg::Instance inst =
      sdg::random_ktree(static_cast<int>(state.range(0)), 3, 7,
                        sdg::ScoringVector({1, -1}));
  for (auto _ : state) {
    auto dec = sdg::build_nice_decomposition(inst);
    benchmark::DoNotOptimize(dec.root);
  }
}
BENCHMARK(BM_TreewidthDecomposition)->Arg(13)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
