#include <benchmark/benchmark.h>

#include <string>

#include "nameguess/difficulty.hpp"
#include "nameguess/metrics.hpp"

using namespace nameguess;

static void BM_EditDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::string a, b;
  for (std::size_t i = 0; i < n; ++i) {
    a += static_cast<char>('a' + i % 26);
    b += static_cast<char>('a' + (i * 7) % 26);
  }
  for (auto _ : state) benchmark::DoNotOptimize(edit_distance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditDistance)->RangeMultiplier(4)->Range(8, 512)->Complexity(benchmark::oNSquared);

static void BM_Classify(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(classify("2013MailAddrDist", "Mailing Address District 2013"));
}
BENCHMARK(BM_Classify);

static void BM_TokenF1(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(token_f1("the customer's full name", "Customer Name"));
  }
}
BENCHMARK(BM_TokenF1);

static void BM_ExactMatch(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exact_match("Order  Date.", "order date"));
}
BENCHMARK(BM_ExactMatch);
BENCHMARK_MAIN();
