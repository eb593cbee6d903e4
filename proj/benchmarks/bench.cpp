#include <benchmark/benchmark.h>

#include "adjbraid/arrangement.hpp"
#include "adjbraid/calculus.hpp"
#include "adjbraid/forests.hpp"
#include "adjbraid/steinmann.hpp"

using namespace adjbraid;

namespace {

void BM_EnumerateOneBlock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Partition p = Partition::one_block(GroundSet::numbered(n));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_shards(p));
}
BENCHMARK(BM_EnumerateOneBlock)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_EnumerateNaive(benchmark::State& state) {
  Partition p = Partition::one_block(GroundSet::numbered(4));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_shards_naive(p));
}
BENCHMARK(BM_EnumerateNaive)->Unit(benchmark::kMillisecond);

void BM_Feasibility(benchmark::State& state) {
  Partition p = Partition::one_block(GroundSet::numbered(5));
  auto keys = keys_of(p);
  RationalMatrix a = flat_constraints(p, *keys);
  auto space = ShardSpace::of(p);
  std::vector<Sign> signs;
  for (std::size_t i = 0; i < keys->size(); ++i) {
    signs.push_back(keys->negative(space->signs(space->size() / 2), i) ? Sign::Negative : Sign::Positive);
  }
  for (auto _ : state) benchmark::DoNotOptimize(strictly_feasible(a, signs));
}
BENCHMARK(BM_Feasibility)->Unit(benchmark::kMicrosecond);

void BM_RelationRank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = GroundSet::numbered(n);
  ShardSpace::of(Partition::one_block(g));
  for (auto _ : state) {
    RelationSet rs = steinmann_relations(g);
    benchmark::DoNotOptimize(rank(rs.matrix()));
  }
}
BENCHMARK(BM_RelationRank)->DenseRange(4, 5)->Unit(benchmark::kMillisecond);

void BM_DualDerivative(benchmark::State& state) {
  auto g = GroundSet::numbered(5);
  auto f = parse_forest("[[[1,2],3],[4,5]]@0,1,2,3", g);
  auto x = ShardVector::basis(ShardSpace::of(f.target()), 0);
  for (auto _ : state) benchmark::DoNotOptimize(dual_forest_derivative(f, x));
}
BENCHMARK(BM_DualDerivative)->Unit(benchmark::kMicrosecond);

void BM_ForestDerivative(benchmark::State& state) {
  auto g = GroundSet::numbered(5);
  auto f = parse_forest("[[1,2],[3,[4,5]]]@0,1,2,3", g);
  Functional h = Functional::constant(ShardSpace::of(f.source()), 1);
  for (std::size_t i = 0; i < h.values().size(); i += 3) h[i] = Rational(static_cast<long>(i));
  for (auto _ : state) benchmark::DoNotOptimize(forest_derivative(f, h));
}
BENCHMARK(BM_ForestDerivative)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
