#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "nameguess/abbrev.hpp"
#include "nameguess/rng.hpp"

using namespace nameguess;

namespace {

const Dictionaries& dictionaries() {
  static const Dictionaries dicts{
      LookupDict::load_file(std::string(NAMEGUESS_BENCH_DATA_DIR) + "/lookup.tsv"),
      AcronymDict::load_file(std::string(NAMEGUESS_BENCH_DATA_DIR) + "/acronyms.tsv")};
  return dicts;
}

}  // namespace

static void BM_AbbreviateHeader(benchmark::State& state) {
  const auto& dicts = dictionaries();
  const std::vector<std::vector<std::string>> headers{
      {"Current", "Balance"}, {"Employee", "Date", "of", "Birth"},
      {"Mailing", "Address", "District", "2013"}, {"Fiscal", "Year", "2021"}};
  FabricationConfig config;
  Rng rng(1);
  std::size_t i = 0;
  for (auto _ : state) {
    TableCache cache;
    benchmark::DoNotOptimize(abbreviate_header(headers[i++ % headers.size()], config, dicts, cache, rng));
  }
}
BENCHMARK(BM_AbbreviateHeader);

static void BM_Rule(benchmark::State& state) {
  const auto rule = static_cast<Rule>(state.range(0));
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_rule(rule, "administration", 4, rng));
}
BENCHMARK(BM_Rule)->DenseRange(0, 2);
