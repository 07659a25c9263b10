// Serial (workers=1) against OpenMP workers on the same decomposition.
#include <benchmark/benchmark.h>

#include <random>

#include "sgraph/graph.hpp"
#include "sgraph/kway.hpp"
#include "sgraph/msf.hpp"
#include "sgraph/partition.hpp"
#include "sgraph/subgraph.hpp"
#include "sgraph/triangles.hpp"

using namespace sgraph;

namespace {

// Clustered random graph so that subgraphs have real local work.
Graph clustered(std::uint32_t n, std::uint32_t blocks, double inside, double across) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<std::int64_t> weight(1, 1000);
  GraphBuilder b;
  for (VertexId u = 1; u <= n; ++u) {
    b.addVertex(u);
    for (VertexId v = u + 1; v <= n; ++v) {
      const bool same = (u - 1) * blocks / n == (v - 1) * blocks / n;
      if (coin(rng) < (same ? inside : across)) b.addEdge(u, v, Weight::fromUnits(weight(rng) * 1000));
    }
  }
  return b.build();
}

const Decomposition& fixture() {
  static const Graph g = clustered(3000, 32, 0.08, 0.0005);
  static const Decomposition d = Decomposition::extract(g, partitionBlocks(g, 32));
  return d;
}

EngineConfig withWorkers(const benchmark::State& state) {
  EngineConfig c;
  c.workerCount = static_cast<std::size_t>(state.range(0));
  c.deterministic = true;
  return c;
}

void report(benchmark::State& state, const RunMetrics& m) {
  state.counters["supersteps"] = static_cast<double>(m.superstepCount());
  state.counters["envelopes"] = static_cast<double>(m.totalEnvelopes);
}

void BM_Triangles(benchmark::State& state) {
  const auto& d = fixture();
  for (auto _ : state) {
    auto r = countTrianglesSubgraphCentric(d, withWorkers(state));
    benchmark::DoNotOptimize(r.count);
    report(state, r.metrics);
  }
}

void BM_Msf(benchmark::State& state) {
  const auto& d = fixture();
  for (auto _ : state) {
    auto r = runMsf(d, withWorkers(state));
    benchmark::DoNotOptimize(r.totalWeight);
    report(state, r.metrics);
  }
}

void BM_Kway(benchmark::State& state) {
  const auto& d = fixture();
  for (auto _ : state) {
    auto r = runKway(d, {.k = 8, .tau = 0, .maxRounds = 2, .seed = 3}, withWorkers(state));
    benchmark::DoNotOptimize(r.clustering.cut);
    report(state, r.metrics);
  }
}

}  // namespace

BENCHMARK(BM_Triangles)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Msf)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Kway)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
