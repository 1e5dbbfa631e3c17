#include <doctest.h>

#include <algorithm>
#include <random>

#include "nameguess/error.hpp"
#include "nameguess/metrics.hpp"
#include "oracles.hpp"

using namespace nameguess;

namespace {

std::string random_answer(std::mt19937& gen) {
  static const std::vector<std::string> words{"customer", "name", "the", "a",  "an",  "Date",
                                              "CODE",     "2021", "full", "id", "of", "zip"};
  static const std::string punct = ".,-_!?()'";
  std::string s;
  const std::size_t n = gen() % 5;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += gen() % 4 == 0 ? std::string(1, punct[gen() % punct.size()]) : " ";
    s += words[gen() % words.size()];
  }
  if (gen() % 3 == 0) s += punct[gen() % punct.size()];
  return s;
}

EvalRecord rec(std::string table, std::size_t col, std::optional<std::string> pred,
               std::string gold, DifficultyLevel level) {
  return score_record(std::move(table), col, std::move(pred), std::move(gold), level);
}

}  // namespace

TEST_CASE("normalize_answer examples") {
  CHECK(normalize_answer("The Customer-Name.") == "customer name");
  CHECK(normalize_answer("FY 2021") == "fy 2021");
  CHECK(normalize_answer("a") == "");
  CHECK(normalize_answer("  Theory   of  an apple ") == "theory of apple");
}

TEST_CASE("exact_match examples") {
  CHECK(exact_match("customer name", "Customer Name") == 1);
  CHECK(exact_match("customer", "customer name") == 0);
  CHECK(exact_match("the date", "date") == 1);
}

TEST_CASE("token_f1 examples") {
  CHECK(token_f1("Customer Name", "customer name") == 1.0);
  CHECK(token_f1("customer name", "customer full name") == 0.8);
  CHECK(token_f1("zip", "date") == 0.0);
  CHECK(token_f1("", "date") == 0.0);
  CHECK(token_f1("name name", "name") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("metrics agree with the brute-force oracle") {
  std::mt19937 gen(31);
  for (int i = 0; i < 2000; ++i) {
    const auto p = random_answer(gen);
    const auto g = random_answer(gen);
    REQUIRE(exact_match(p, g) == ngtest::oracle::exact_match(p, g));
    REQUIRE(std::abs(token_f1(p, g) - ngtest::oracle::token_f1(p, g)) <= 1e-9);
    REQUIRE(token_f1(p, g) == token_f1(g, p));
    const auto r = rec("t", 0, p, g, DifficultyLevel::easy);
    REQUIRE(r.f1 >= 0.0);
    REQUIRE(r.f1 <= 1.0);
    if (r.em) REQUIRE(r.f1 == 1.0);
  }
}

TEST_CASE("aggregate conventions") {
  std::vector<EvalRecord> all_right;
  for (std::size_t i = 0; i < 4; ++i) {
    all_right.push_back(rec("t", i, "Customer Name", "customer name", kAllLevels[i]));
  }
  const auto r1 = aggregate(all_right);
  CHECK(r1.overall.all.em == 1.0);
  CHECK(r1.overall.all.f1 == 1.0);
  CHECK(r1.overall.extraction_rate == 1.0);

  std::vector<EvalRecord> half;
  half.push_back(rec("t", 0, "Date", "date", DifficultyLevel::easy));
  half.push_back(rec("t", 1, std::nullopt, "zip", DifficultyLevel::easy));
  const auto r2 = aggregate(half);
  CHECK(r2.overall.extracted.em == 1.0);
  CHECK(r2.overall.all.em == 0.5);
  CHECK(r2.overall.extraction_rate == 0.5);
  CHECK(r2.level(DifficultyLevel::easy).all.n == 2);
  CHECK(r2.level(DifficultyLevel::hard).all.n == 0);
  CHECK_THROWS_AS(aggregate(std::vector<EvalRecord>{}), InputError);
}

TEST_CASE("aggregate is order independent and counts add up") {
  std::mt19937 gen(8);
  std::vector<EvalRecord> records;
  for (std::size_t i = 0; i < 300; ++i) {
    std::optional<std::string> p;
    if (gen() % 5) p = random_answer(gen);
    records.push_back(rec("t" + std::to_string(i % 7), i, p, random_answer(gen) + " x",
                          kAllLevels[gen() % 4]));
  }
  const auto base = to_json(aggregate(records)).dump();
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(records.begin(), records.end(), gen);
    REQUIRE(to_json(aggregate(records)).dump() == base);
  }
  const auto r = aggregate(records);
  std::size_t total = 0;
  for (auto l : kAllLevels) total += r.level(l).all.n;
  CHECK(total == r.overall.all.n);
  CHECK(report_from_json(to_json(r)).overall.all.em == r.overall.all.em);
}

TEST_CASE("plugin metrics are scored per record") {
  struct Length : Metric {
    std::string name() const override { return "len_ratio"; }
    double score(std::string_view p, std::string_view g) const override {
      return static_cast<double>(p.size()) / static_cast<double>(g.size());
    }
  };
  std::vector<std::shared_ptr<const Metric>> plugins{std::make_shared<Length>()};
  const auto r = score_record("t", 0, "ab", "abcd", DifficultyLevel::easy, plugins);
  CHECK(r.extra.at("len_ratio") == 0.5);
  CHECK(to_json(r)["len_ratio"] == 0.5);
}

TEST_CASE("rendered report layout") {
  std::vector<EvalRecord> records{rec("t", 0, "a b", "a b c", DifficultyLevel::medium)};
  const std::vector<std::pair<std::string, EvalReport>> cols{{"q", aggregate(records)},
                                                             {"t'+q", aggregate(records)}};
  const auto text = render_report(cols);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    lines.push_back(text.substr(start, nl - start));
  }
  REQUIRE(lines.size() == 8);
  CHECK(lines[0].find("q") != std::string::npos);
  CHECK(lines[0].find("t'+q") != std::string::npos);
  CHECK(lines[3].rfind("Overall", 0) == 0);
  CHECK(lines[7].rfind("Extra Hard", 0) == 0);
  CHECK(lines[5].find("100.0") == std::string::npos);
}
