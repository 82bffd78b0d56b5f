// Microbenchmarks for the hot paths: constraint/corner enumeration, the two
// exact solvers, the brute-force oracle, and the per-epoch sampling cost of
// the simulator. Run with --benchmark_filter=<regex> to narrow.
#include <benchmark/benchmark.h>

#include "agepir/avg_solver.hpp"
#include "agepir/capacity.hpp"
#include "agepir/model.hpp"
#include "agepir/oracle.hpp"
#include "agepir/peak_solver.hpp"
#include "agepir/sim.hpp"

namespace {

using namespace agepir;

SystemConfig two_server_config() {
  SystemConfig cfg;
  cfg.num_servers = 2;
  cfg.num_messages = 3;
  cfg.message_length = 8;
  cfg.r_min = Rat(11, 20);
  cfg.servers = {{Rat(1), Rat(4)}, {Rat(2), Rat(1)}};
  return cfg;
}

SystemConfig three_server_config() {
  SystemConfig cfg;
  cfg.num_servers = 3;
  cfg.num_messages = 3;
  cfg.message_length = 72;
  cfg.r_min = Rat(1, 2);
  cfg.servers = {{Rat(1), Rat(10)}, {Rat(5), Rat(5)}, {Rat(10), Rat(1)}};
  return cfg;
}

void BM_CapacityAsym(benchmark::State& state) {
  const TrafficRatio tau({Rat(9, 19), Rat(9, 19), Rat(1, 19)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(capacity_asym(tau, 3));
  }
}
BENCHMARK(BM_CapacityAsym);

void BM_CornerPoints(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(corner_points(n, 3, 72));
  }
}
BENCHMARK(BM_CornerPoints)->Arg(2)->Arg(3);

void BM_PeakClosedForm(benchmark::State& state) {
  const SystemConfig cfg = two_server_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_peak_n2m3(cfg));
  }
}
BENCHMARK(BM_PeakClosedForm);

void BM_PeakVertexEnumeration(benchmark::State& state) {
  const SystemConfig cfg = three_server_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_peak_lp(cfg));
  }
}
BENCHMARK(BM_PeakVertexEnumeration);

void BM_AverageHullSolve(benchmark::State& state) {
  const SystemConfig cfg = three_server_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_avg_general(cfg));
  }
}
BENCHMARK(BM_AverageHullSolve);

void BM_OracleGrid(benchmark::State& state) {
  SystemConfig cfg = two_server_config();
  cfg.r_min = Rat(1, 3);
  const Rat resolution(cfg.message_length, state.range(0));
  std::size_t scanned = 0;
  for (auto _ : state) {
    const OracleResult res = grid_search(cfg, Metric::peak, resolution);
    scanned = res.points_scanned;
    benchmark::DoNotOptimize(res);
  }
  state.counters["points"] = static_cast<double>(scanned);
}
BENCHMARK(BM_OracleGrid)->Arg(8)->Arg(16)->Arg(32);

void BM_SimulateEpochs(benchmark::State& state) {
  const SystemConfig cfg = two_server_config();
  DownloadAllocation alloc;
  alloc.d = {Rat(8), Rat(6)};
  const MixturePolicy policy = MixturePolicy::degenerate(alloc);
  const std::size_t epochs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg, policy, epochs, 1));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(epochs));
}
BENCHMARK(BM_SimulateEpochs)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
