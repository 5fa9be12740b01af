#include <benchmark/benchmark.h>

#include <random>

#include "vndim/exact_linalg.hpp"

using namespace vndim;

namespace {

SparseExactMatrix random_sparse(std::uint64_t seed, std::int64_t n, int per_row) {
  std::mt19937_64 rng(seed);
  SparseExactMatrix m(n, n);
  std::uniform_int_distribution<std::int64_t> col(0, n - 1);
  std::uniform_int_distribution<std::int64_t> num(-5, 5);
  std::uniform_int_distribution<std::int64_t> den(1, 4);
  for (std::int64_t r = 0; r < n; ++r)
    for (int k = 0; k < per_row; ++k)
      m.set(r, col(rng), GQ(rat(num(rng), den(rng)), rat(num(rng), 3)));
  return m;
}

}  // namespace

static void BM_ExactRankRandomSparse(benchmark::State& state) {
  auto m = random_sparse(7, state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank(m));
}
BENCHMARK(BM_ExactRankRandomSparse)->Arg(40)->Arg(80)->Arg(160);

static void BM_ModularProbe(benchmark::State& state) {
  auto m = random_sparse(7, state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(modular_rank_probe(m, 1000000007ull));
}
BENCHMARK(BM_ModularProbe)->Arg(40)->Arg(80)->Arg(160);

static void BM_TorusKernelDim(benchmark::State& state) {
  // circulant of 1 - (g1+g2)/2 over (Z/m)^2
  std::int64_t m = state.range(0);
  SparseExactMatrix mat(m * m, m * m);
  for (std::int64_t x = 0; x < m; ++x)
    for (std::int64_t y = 0; y < m; ++y) {
      std::int64_t at = x * m + y;
      mat.add(at, at, GQ(rat(1)));
      mat.add(((x + 1) % m) * m + y, at, GQ(rat(-1, 2)));
      mat.add(x * m + (y + 1) % m, at, GQ(rat(-1, 2)));
    }
  for (auto _ : state) benchmark::DoNotOptimize(kernel_dimension(mat));
}
BENCHMARK(BM_TorusKernelDim)->Arg(8)->Arg(12)->Arg(16);
