#include <benchmark/benchmark.h>

#include "forestfact/verify.hpp"
#include "forestfact/window.hpp"

using namespace forestfact;

namespace {

std::shared_ptr<const Family> mixed() {
  static auto fam = std::make_shared<SpecFamily>(*builtin_family("mixed-trees"));
  return fam;
}

// A fresh engine per iteration: the memo tables would otherwise make every
// run after the first a lookup.
void BM_MaterializeSerial(benchmark::State& state) {
  for (auto _ : state) {
    Engine e(mixed());
    benchmark::DoNotOptimize(materialize_ball_serial(e, state.range(0), 4, 6));
  }
}

void BM_MaterializeParallel(benchmark::State& state) {
  for (auto _ : state) {
    Engine e(mixed());
    benchmark::DoNotOptimize(materialize_ball(e, state.range(0), 4, 6));
  }
}

const BallMaterialization& window(Nat radius) {
  static std::map<Nat, BallMaterialization> cache;
  auto it = cache.find(radius);
  if (it == cache.end()) {
    Engine e(mixed());
    it = cache.emplace(radius, materialize_ball(e, radius, 4, 6)).first;
  }
  return it->second;
}

void BM_AdjacencySerial(benchmark::State& state) {
  const auto& b = window(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_adjacency_serial(b, *mixed()));
}

void BM_AdjacencyParallel(benchmark::State& state) {
  const auto& b = window(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_adjacency(b, *mixed()));
}

}  // namespace

BENCHMARK(BM_MaterializeSerial)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaterializeParallel)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdjacencySerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdjacencyParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
