#include <benchmark/benchmark.h>

#include "vndim/tiling.hpp"

using namespace vndim;

static void BM_QuasiTileBox(benchmark::State& state) {
  auto z2 = GroupContext::free_abelian(2);
  std::vector<FolnerSet> ex;
  for (std::int64_t t = 1; t <= 10; ++t) {
    std::vector<GroupElement> box;
    for (std::int64_t x = -t; x <= t; ++x)
      for (std::int64_t y = -t; y <= t; ++y) box.push_back(GroupElement{{x, y}});
    ex.push_back(FolnerSet::of(z2, std::move(box)));
  }
  std::int64_t n = state.range(0);
  std::vector<GroupElement> big;
  for (std::int64_t x = -n; x <= n; ++x)
    for (std::int64_t y = -n; y <= n; ++y) big.push_back(GroupElement{{x, y}});
  auto B = ColoredGraph::cayley_subgraph(z2, big);
  for (auto _ : state) {
    auto tiling = quasi_tile(B, z2, ex, rat(1, 4));
    benchmark::DoNotOptimize(tiling);
  }
}
BENCHMARK(BM_QuasiTileBox)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_QuasiTileCycle(benchmark::State& state) {
  auto z = GroupContext::free_abelian(1);
  std::vector<FolnerSet> ex;
  for (std::int64_t r = 1; r <= 100; ++r) {
    std::vector<GroupElement> v;
    for (std::int64_t i = -r; i <= r; ++i) v.push_back(GroupElement{{i}});
    ex.push_back(FolnerSet::of(z, std::move(v)));
  }
  auto q = GroupContext::finite_quotient(1, {state.range(0)});
  std::vector<GroupElement> all;
  for (std::int64_t i = 0; i < state.range(0); ++i) all.push_back(GroupElement{{i}});
  auto B = ColoredGraph::cayley_subgraph(q, all);
  for (auto _ : state) {
    auto tiling = quasi_tile(B, z, ex, rat(1, 4));
    benchmark::DoNotOptimize(tiling);
  }
}
BENCHMARK(BM_QuasiTileCycle)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
