#include <benchmark/benchmark.h>

#include "vndim/colored_graph.hpp"

using namespace vndim;

namespace {

ColoredGraph box_graph(std::int64_t n) {
  auto z2 = GroupContext::free_abelian(2);
  std::vector<GroupElement> box;
  for (std::int64_t x = -n; x <= n; ++x)
    for (std::int64_t y = -n; y <= n; ++y) box.push_back(GroupElement{{x, y}});
  return ColoredGraph::cayley_subgraph(z2, box);
}

}  // namespace

static void BM_SimilarityScanBox(benchmark::State& state) {
  auto z2 = GroupContext::free_abelian(2);
  auto g = box_graph(state.range(0));
  for (auto _ : state) {
    auto radii = similarity_radii(g, z2, 8);
    benchmark::DoNotOptimize(radii);
  }
}
BENCHMARK(BM_SimilarityScanBox)->Arg(10)->Arg(20)->Arg(40);

static void BM_SimilarityScanCycle(benchmark::State& state) {
  auto z = GroupContext::free_abelian(1);
  auto q = GroupContext::finite_quotient(1, {state.range(0)});
  std::vector<GroupElement> all;
  for (std::int64_t i = 0; i < state.range(0); ++i) all.push_back(GroupElement{{i}});
  auto g = ColoredGraph::cayley_subgraph(q, all);
  for (auto _ : state) {
    auto radii = similarity_radii(g, z, 64);
    benchmark::DoNotOptimize(radii);
  }
}
BENCHMARK(BM_SimilarityScanCycle)->Arg(256)->Arg(1024)->Arg(4096);
