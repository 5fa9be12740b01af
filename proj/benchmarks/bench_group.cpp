#include <benchmark/benchmark.h>

#include "vndim/group.hpp"

using namespace vndim;

static void BM_BallEnumerationZ2(benchmark::State& state) {
  auto ctx = GroupContext::free_abelian(2);
  std::int64_t k = state.range(0);
  for (auto _ : state) {
    auto ball = ctx.ball_elements(k);
    benchmark::DoNotOptimize(ball);
  }
}
BENCHMARK(BM_BallEnumerationZ2)->Arg(8)->Arg(16)->Arg(32);

static void BM_BallEnumerationHeisenberg(benchmark::State& state) {
  auto ctx = GroupContext::heisenberg();
  std::int64_t k = state.range(0);
  for (auto _ : state) {
    auto ball = ctx.ball_elements(k);
    benchmark::DoNotOptimize(ball);
  }
}
BENCHMARK(BM_BallEnumerationHeisenberg)->Arg(4)->Arg(6)->Arg(8);

static void BM_HeisenbergWordLength(benchmark::State& state) {
  auto ctx = GroupContext::heisenberg();
  GroupElement g{{0, 0, state.range(0)}};
  for (auto _ : state) benchmark::DoNotOptimize(ctx.word_length(g));
}
BENCHMARK(BM_HeisenbergWordLength)->Arg(1)->Arg(4)->Arg(9);
