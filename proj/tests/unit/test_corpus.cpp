#include <doctest.h>

#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "nameguess/corpus.hpp"
#include "nameguess/error.hpp"

using namespace nameguess;

namespace {

Table parse(const std::string& text) {
  std::istringstream in(text);
  return ingest_csv(in, "t");
}

Table grid(std::size_t rows, std::size_t cols, double nan_share = 0.0,
           const std::vector<std::string>& headers = {}) {
  Table t;
  t.id = "g" + std::to_string(rows) + "x" + std::to_string(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    t.headers.push_back(c < headers.size() ? headers[c] : "col" + std::to_string(c));
  }
  const auto nan_cells = static_cast<std::size_t>(nan_share * static_cast<double>(rows * cols));
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Cell> row;
    for (std::size_t c = 0; c < cols; ++c, ++k) {
      if (k < nan_cells) row.emplace_back(std::nullopt);
      else row.emplace_back(std::to_string(k));
    }
    t.cells.push_back(row);
  }
  return t;
}

}  // namespace

TEST_CASE("ingest_csv parses headers and rows") {
  const auto t = parse("a,b\n1,2\n3,4");
  CHECK(t.headers == std::vector<std::string>{"a", "b"});
  REQUIRE(t.n_rows() == 2);
  CHECK(t.cells[1][0] == "3");
  CHECK(t.cells[1][1] == "4");
}

TEST_CASE("blank and NaN-like cells become absent") {
  const auto t = parse("a,b,c,d,e,f,g\n,NaN,nan,NA,null,NULL,x\n");
  for (std::size_t c = 0; c < 6; ++c) CHECK_FALSE(t.cells[0][c].has_value());
  CHECK(t.cells[0][6] == "x");
  CHECK(is_nan_token(""));
  CHECK_FALSE(is_nan_token("none"));
}

TEST_CASE("quoted fields keep delimiters, quotes and newlines") {
  const auto t = parse("\xEF\xBB\xBFname,note\r\n\"Smith, J\",\"said \"\"hi\"\"\nthen left\"\r\n");
  CHECK(t.headers[0] == "name");
  CHECK(t.cells[0][0] == "Smith, J");
  CHECK(t.cells[0][1] == "said \"hi\"\nthen left");
}

TEST_CASE("ragged rows name the offending row") {
  try {
    parse("a,b\n1,2\n3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
  }
  CHECK_THROWS_AS(parse("a,b\n\"open,2\n"), ParseError);
}

TEST_CASE("empty input is an empty-table error") {
  CHECK_THROWS_AS(parse(""), EmptyTableError);
  CHECK_THROWS_AS(parse("\n\n"), EmptyTableError);
}

TEST_CASE("write_csv round-trips random tables") {
  std::mt19937 gen(3);
  const std::string alphabet = "ab,\"\n x1";
  for (int trial = 0; trial < 200; ++trial) {
    Table t;
    t.id = "t";
    const std::size_t cols = 1 + gen() % 4;
    for (std::size_t c = 0; c < cols; ++c) t.headers.push_back("h" + std::to_string(c));
    for (std::size_t r = 0; r < gen() % 5; ++r) {
      std::vector<Cell> row;
      for (std::size_t c = 0; c < cols; ++c) {
        std::string v;
        for (std::size_t i = 0; i < 1 + gen() % 6; ++i) v += alphabet[gen() % alphabet.size()];
        if (is_nan_token(v)) row.emplace_back(std::nullopt);
        else row.emplace_back(v);
      }
      // A row whose only cell is blank would read back as a skipped blank line.
      if (cols == 1 && !row[0]) continue;
      t.cells.push_back(row);
    }
    std::ostringstream out;
    write_csv(out, t);
    std::istringstream in(out.str());
    const auto back = ingest_csv(in, "t");
    REQUIRE(back.headers == t.headers);
    REQUIRE(back.cells == t.cells);
  }
}

TEST_CASE("filter_tables applies each criterion") {
  std::vector<Table> tables{grid(4, 10), grid(10, 10, 0.6), grid(10, 10), grid(10, 4)};
  tables[1].id = "nan";
  const auto r = filter_tables(tables, FilterCriteria{});
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].id == "g10x10");
  REQUIRE(r.rejected.size() == 3);
  CHECK(r.rejected[0].reason == kTooFewRows);
  CHECK(r.rejected[1].reason == kNanFraction);
  CHECK(r.rejected[2].reason == kTooFewColumns);
}

TEST_CASE("duplicate header fraction is case-sensitive") {
  auto t = grid(6, 6, 0.0, {"a", "a", "a", "a", "b", "B"});
  CHECK(duplicate_name_fraction(t) == doctest::Approx(0.5));
  CHECK(filter_tables({t}, {}).kept.size() == 1);
  t.headers[4] = "a";
  CHECK(filter_tables({t}, {}).rejected.at(0).reason == kDuplicateNames);
}

TEST_CASE("kept tables are truncated to the retained row count") {
  FilterCriteria c;
  c.max_rows_retained = 7;
  const auto r = filter_tables({grid(20, 5)}, c);
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].n_rows() == 7);
  CHECK(r.kept[0].cells[0][0] == "0");
}

TEST_CASE("criteria validation") {
  FilterCriteria c;
  c.max_nan_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.min_rows = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("filter_tables is idempotent and partitions its input") {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Table> tables;
    for (int i = 0; i < 12; ++i) {
      auto t = grid(1 + gen() % 15, 1 + gen() % 9, (gen() % 10) / 10.0);
      t.id = "t" + std::to_string(i);
      if (gen() % 4 == 0 && t.n_cols() > 1) t.headers[1] = t.headers[0];
      tables.push_back(t);
    }
    FilterCriteria c;
    c.max_rows_retained = 5 + gen() % 6;
    const auto first = filter_tables(tables, c);
    std::multiset<std::string> ids;
    for (const auto& t : first.kept) ids.insert(t.id);
    for (const auto& r : first.rejected) ids.insert(r.id);
    std::multiset<std::string> expected;
    for (const auto& t : tables) expected.insert(t.id);
    REQUIRE(ids == expected);

    const auto second = filter_tables(first.kept, c);
    REQUIRE(second.rejected.empty());
    REQUIRE(second.kept.size() == first.kept.size());
    for (std::size_t i = 0; i < second.kept.size(); ++i) {
      REQUIRE(second.kept[i].cells == first.kept[i].cells);
    }
  }
}

TEST_CASE("manifest entries") {
  const auto kept = manifest_entry(grid(6, 5));
  CHECK(kept.dump() == R"({"id":"g6x5","n_rows":6,"n_cols":5,"kept":true,"reason":null})");
  const auto rej = manifest_entry(Rejection{"x", std::string(kTooFewRows), 2, 9});
  CHECK(rej["reason"] == "too few rows");
  CHECK(rej["kept"] == false);
}

TEST_CASE("socrata payloads keep field order and map nulls") {
  const auto t = table_from_socrata_json(
      R"([{"b":"1","a":2},{"a":null,"c":true},{"b":"x"}])", "ds", 2);
  CHECK(t.headers == std::vector<std::string>{"b", "a", "c"});
  REQUIRE(t.n_rows() == 2);
  CHECK(t.cells[0][1] == "2");
  CHECK_FALSE(t.cells[1][1].has_value());
  CHECK_FALSE(t.cells[1][0].has_value());
  CHECK(t.cells[1][2] == "true");
  CHECK_THROWS_AS(table_from_socrata_json(R"({"a":1})", "ds", 5), DecodeError);
  CHECK_THROWS_AS(table_from_socrata_json(R"([1,2])", "ds", 5), DecodeError);
  CHECK_THROWS_AS(table_from_socrata_json("not json", "ds", 5), DecodeError);
}

TEST_CASE("fetch_socrata against a local server") {
  httplib::Server server;
  std::string seen_limit, seen_token;
  server.Get("/resource/abcd-1234.json", [&](const httplib::Request& req, httplib::Response& res) {
    seen_limit = req.get_param_value("$limit");
    seen_token = req.get_header_value("X-App-Token");
    res.set_content(R"([{"name":"a","zip":"1"},{"name":"b","zip":"2"},{"name":"c"}])",
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string domain = "http://127.0.0.1:" + std::to_string(port);

  setenv("NAMEGUESS_SOCRATA_TOKEN", "tok123", 1);
  const auto t = fetch_socrata(domain, "abcd-1234", 100);
  unsetenv("NAMEGUESS_SOCRATA_TOKEN");
  CHECK(seen_limit == "100");
  CHECK(seen_token == "tok123");
  CHECK(t.id == "abcd-1234");
  CHECK(t.n_rows() == 3);
  CHECK(t.headers == std::vector<std::string>{"name", "zip"});

  try {
    fetch_socrata(domain, "nope-0000", 10);
    FAIL("expected TransportError");
  } catch (const TransportError& e) {
    CHECK(e.status() == 404);
  }
  CHECK_THROWS_AS(fetch_socrata(domain, "abcd-1234", 0), InputError);

  server.stop();
  th.join();
}
