#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "nameguess/segment.hpp"

using namespace nameguess;

namespace {

const FrequencyLexicon& lexicon() {
  static const auto lex = FrequencyLexicon::load_file(std::string(NAMEGUESS_BENCH_DATA_DIR) + "/lexicon.txt");
  return lex;
}

const std::vector<std::string> kNames{"mailingaddressdistrict2013", "CustomerAccountBalance",
                                      "emp_date_of_birth", "fiscalyeartotalrevenue",
                                      "zipcode", "ProductCategoryName"};

}  // namespace

static void BM_SegmentRun(benchmark::State& state) {
  const auto& lex = lexicon();
  std::string text;
  while (text.size() < static_cast<std::size_t>(state.range(0))) text += "totalsum";
  for (auto _ : state) benchmark::DoNotOptimize(segment_run(text, lex));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SegmentRun)->RangeMultiplier(2)->Range(8, 256)->Complexity();

static void BM_SplitIdentifier(benchmark::State& state) {
  const auto& lex = lexicon();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(split_identifier(kNames[i++ % kNames.size()], lex));
}
BENCHMARK(BM_SplitIdentifier);
