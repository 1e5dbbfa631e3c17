#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "nameguess/fabricate.hpp"
#include "nameguess/jsonl.hpp"
#include "nameguess/promptkit.hpp"

namespace fs = std::filesystem;
using nameguess::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& path) {
  std::size_t n = 0;
  nameguess::for_each_jsonl(path, [&](nlohmann::json&&) { ++n; });
  return n;
}

}  // namespace

TEST_CASE("version and usage errors") {
  std::ostringstream out, err;
  CHECK(run_cli({"--version"}, out, err) == 0);
  CHECK(out.str().find("0.") != std::string::npos);
  CHECK(run({"fabricate", "--bogus"}).code == 1);
  CHECK(run({"score"}).code == 1);
  CHECK(run({}).code == 1);
}

TEST_CASE("missing inputs exit with 1") {
  ngtest::TempDir dir("cli-missing");
  const auto r = run({"fabricate", "--tables", dir.file("nope"), "--out", dir.file("p.jsonl")});
  CHECK(r.code == 1);
  CHECK(r.err.find("not found") != std::string::npos);
  CHECK(run({"score", "--pairs", dir.file("x"), "--preds", dir.file("y")}).code == 1);
}

TEST_CASE("ingest filters and writes a manifest") {
  ngtest::TempDir dir("cli-ingest");
  auto tables = ngtest::synthetic_tables(4, 6, 8, 9);
  tables[1].cells.resize(3);
  ngtest::write_tables(dir.path() / "raw", tables);
  const auto r = run({"ingest", (dir.path() / "raw").string(), "--out-dir", dir.file("kept"),
                      "--max-rows", "6"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(dir.file("kept/manifest.jsonl")) == 4);
  CHECK(fs::exists(dir.file("kept/manifest.jsonl.run.json")));
  CHECK_FALSE(fs::exists(dir.file("kept/") + tables[1].id + ".csv"));
  std::ifstream in(dir.file("kept/") + tables[0].id + ".csv");
  CHECK(nameguess::ingest_csv(in, "x").n_rows() == 6);
}

TEST_CASE("pipeline with stub models") {
  ngtest::TempDir dir("cli-pipe");
  ngtest::write_tables(dir.path() / "t", ngtest::synthetic_tables(6, 23, 12, 10));
  const auto t = (dir.path() / "t").string();
  const auto pairs = dir.file("pairs.jsonl");

  REQUIRE(run({"fabricate", "--tables", t, "--out", pairs, "--seed", "7"}).code == 0);
  const auto run_json = nlohmann::json::parse(ngtest::read_file(pairs + ".run.json"));
  CHECK(run_json["seed"] == 7);
  CHECK(run_json["command"] == "fabricate");

  REQUIRE(run({"classify-difficulty", "--pairs", pairs}).code == 0);
  for (const auto& p : nameguess::read_pairs(pairs)) REQUIRE(p.difficulty.has_value());

  const auto prompts = dir.file("prompts.jsonl");
  REQUIRE(run({"prompts", "--pairs", pairs, "--tables", t, "--out", prompts}).code == 0);
  const auto q_prompts = dir.file("q.jsonl");
  REQUIRE(run({"prompts", "--pairs", pairs, "--out", q_prompts, "--no-context"}).code == 0);

  const auto oracle = dir.file("oracle.jsonl");
  REQUIRE(run({"infer", "--prompts", prompts, "--out", oracle, "--stub", "oracle", "--pairs", pairs})
              .code == 0);
  CHECK(fs::exists(oracle + ".raw.jsonl"));
  const auto report = dir.file("report.json");
  const auto s = run({"score", "--pairs", pairs, "--preds", oracle, "--out", report});
  REQUIRE(s.code == 0);
  const auto j = nlohmann::json::parse(ngtest::read_file(report));
  CHECK(j["overall"]["em"] == 1.0);
  CHECK(j["overall"]["f1"] == 1.0);

  const auto offline = dir.file("offline.jsonl");
  REQUIRE(run({"infer", "--prompts", prompts, "--out", offline, "--from-raw", oracle + ".raw.jsonl"})
              .code == 0);
  CHECK(ngtest::read_file(offline) == ngtest::read_file(oracle));

  const auto scr = dir.file("scr.jsonl");
  REQUIRE(run({"infer", "--prompts", q_prompts, "--out", scr, "--stub", "scrambler", "--pairs", pairs})
              .code == 0);
  const auto rep = run({"report", "--pairs", pairs, "--preds-q", scr, "--preds-tq", oracle});
  REQUIRE(rep.code == 0);
  CHECK(rep.out.find("t'+q") != std::string::npos);
  CHECK(rep.out.find("Extra Hard") != std::string::npos);

  CHECK(run({"infer", "--prompts", prompts, "--out", scr, "--stub", "oracle"}).code == 1);
}

TEST_CASE("a 23-column table gives three bundles") {
  ngtest::TempDir dir("cli-23");
  auto tables = ngtest::synthetic_tables(1, 23, 5, 3);
  ngtest::write_tables(dir.path() / "t", tables);
  std::vector<nameguess::NamePair> pairs;
  for (std::size_t c = 0; c < 23; ++c) {
    nameguess::NamePair p;
    p.table_id = tables[0].id;
    p.column_index = c;
    p.query_name = "q" + std::to_string(c);
    p.logical_name = tables[0].headers[c];
    pairs.push_back(p);
  }
  nameguess::write_pairs(dir.file("p.jsonl"), pairs);
  REQUIRE(run({"prompts", "--pairs", dir.file("p.jsonl"), "--tables", (dir.path() / "t").string(),
               "--k", "10", "--n", "10", "--out", dir.file("b.jsonl")})
              .code == 0);
  CHECK(count_lines(dir.file("b.jsonl")) == 3);
}

TEST_CASE("config file values yield to flags") {
  ngtest::TempDir dir("cli-config");
  ngtest::write_tables(dir.path() / "t", ngtest::synthetic_tables(3, 8, 6, 5));
  const auto t = (dir.path() / "t").string();
  {
    std::ofstream cfg(dir.file("cfg.json"));
    cfg << R"({"fabrication": {"seed": 3, "p_acronym": 0.0}})";
  }
  REQUIRE(run({"fabricate", "--tables", t, "--out", dir.file("a.jsonl"), "--seed", "3"}).code == 0);
  REQUIRE(run({"--config", dir.file("cfg.json"), "fabricate", "--tables", t, "--out",
               dir.file("b.jsonl")})
              .code == 0);
  REQUIRE(run({"--config", dir.file("cfg.json"), "fabricate", "--tables", t, "--out",
               dir.file("c.jsonl"), "--seed", "4"})
              .code == 0);
  const auto b = nlohmann::json::parse(ngtest::read_file(dir.file("b.jsonl.run.json")));
  CHECK(b["seed"] == 3);
  CHECK(b["config"]["fabrication"]["p_acronym"] == 0.0);
  const auto c = nlohmann::json::parse(ngtest::read_file(dir.file("c.jsonl.run.json")));
  CHECK(c["seed"] == 4);

  {
    std::ofstream cfg(dir.file("bad.json"));
    cfg << R"({"fabrication": {"p_method": [1, 1, 1]}})";
  }
  CHECK(run({"--config", dir.file("bad.json"), "fabricate", "--tables", t, "--out",
             dir.file("d.jsonl")})
            .code == 1);
}

TEST_CASE("unreachable endpoint exits with 2") {
  ngtest::TempDir dir("cli-endpoint");
  nameguess::PromptBundle b;
  b.bundle_id = "t#0";
  b.table_id = "t";
  b.column_indices = {0};
  b.query_names = {"x"};
  b.prompt = "p";
  {
    nameguess::JsonlWriter w(dir.file("prompts.jsonl"));
    w.write(nameguess::to_json(b));
  }
  const auto r = run({"infer", "--prompts", dir.file("prompts.jsonl"), "--out", dir.file("o.jsonl"),
                      "--endpoint", "http://127.0.0.1:1", "--retries", "0", "--timeout", "1",
                      "--log-json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("\"level\":\"warn\"") != std::string::npos);
  const auto raw = ngtest::read_file(dir.file("o.jsonl.raw.jsonl"));
  CHECK(raw.find("\"completion\":null") != std::string::npos);
  CHECK(ngtest::read_file(dir.file("o.jsonl")).find("\"prediction\":null") != std::string::npos);
}
