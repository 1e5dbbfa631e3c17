#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"
#include "nameguess/abbrev.hpp"
#include "nameguess/corpus.hpp"
#include "nameguess/difficulty.hpp"
#include "nameguess/error.hpp"
#include "nameguess/fabricate.hpp"
#include "nameguess/jsonl.hpp"
#include "nameguess/llmclient.hpp"
#include "nameguess/metrics.hpp"
#include "nameguess/promptkit.hpp"
#include "nameguess/rng.hpp"
#include "nameguess/segment.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace nameguess::cli {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

struct Globals {
  std::string config_path;
  bool log_json = false;
  json config = json::object();

  json section(const char* name) const {
    auto it = config.find(name);
    return it == config.end() ? json::object() : *it;
  }
};

struct DataPaths {
  std::string data_dir;
  std::string lexicon;
  std::string vocab;
  std::string lookup;
  std::string acronyms;

  void resolve() {
    if (data_dir.empty()) data_dir = default_data_dir();
    auto pick = [this](std::string& p, const char* file) {
      if (p.empty()) p = (fs::path(data_dir) / file).string();
    };
    pick(lexicon, "lexicon.txt");
    pick(vocab, "vocabulary.txt");
    pick(lookup, "lookup.tsv");
    pick(acronyms, "acronyms.tsv");
  }
};

void add_data_options(CLI::App* cmd, DataPaths& d, bool dictionaries) {
  cmd->add_option("--data-dir", d.data_dir, "Directory with the shipped word lists");
  cmd->add_option("--lexicon", d.lexicon, "Frequency-ordered word list for segmentation");
  cmd->add_option("--vocab", d.vocab, "Curation vocabulary");
  if (dictionaries) {
    cmd->add_option("--lookup", d.lookup, "Lookup dictionary (word<TAB>abbr|abbr)");
    cmd->add_option("--acronyms", d.acronyms, "Acronym dictionary (phrase<TAB>acronym)");
  }
}

char parse_delimiter(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw InputError("--delimiter must be a single character");
  return s[0];
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::vector<std::string> inputs;
  std::vector<std::string> socrata;
  std::size_t limit = 1000;
  std::string out_dir;
  std::string manifest;
  std::string delimiter = ",";
  std::optional<std::size_t> min_rows, min_cols, max_rows;
  std::optional<double> max_nan, max_dup;
};

FilterCriteria filter_from(const json& j, const IngestOptions& o) {
  FilterCriteria c;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "min_rows") c.min_rows = v.get<std::size_t>();
      else if (k == "min_cols") c.min_cols = v.get<std::size_t>();
      else if (k == "max_nan_fraction") c.max_nan_fraction = v.get<double>();
      else if (k == "max_duplicate_name_fraction") c.max_duplicate_name_fraction = v.get<double>();
      else if (k == "max_rows_retained") c.max_rows_retained = v.get<std::size_t>();
      else throw InputError("unknown filter config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad filter config: ") + e.what());
  }
  if (o.min_rows) c.min_rows = *o.min_rows;
  if (o.min_cols) c.min_cols = *o.min_cols;
  if (o.max_rows) c.max_rows_retained = *o.max_rows;
  if (o.max_nan) c.max_nan_fraction = *o.max_nan;
  if (o.max_dup) c.max_duplicate_name_fraction = *o.max_dup;
  c.validate();
  return c;
}

ordered_json to_json(const FilterCriteria& c) {
  return {{"min_rows", c.min_rows},
          {"min_cols", c.min_cols},
          {"max_nan_fraction", c.max_nan_fraction},
          {"max_duplicate_name_fraction", c.max_duplicate_name_fraction},
          {"max_rows_retained", c.max_rows_retained}};
}

int cmd_ingest(const IngestOptions& o, const Globals& g, Logger& log, RunManifest& run) {
  const FilterCriteria criteria = filter_from(g.section("filter"), o);
  const char delim = parse_delimiter(o.delimiter);
  if (o.inputs.empty() && o.socrata.empty()) {
    throw InputError("ingest needs at least one input path or --socrata dataset");
  }

  std::vector<Table> tables;
  for (const auto& in : o.inputs) {
    auto loaded = load_tables(in, delim);
    run.input("csv", in);
    std::move(loaded.begin(), loaded.end(), std::back_inserter(tables));
  }
  for (const auto& spec : o.socrata) {
    const auto slash = spec.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == spec.size()) {
      throw InputError("--socrata expects DOMAIN/DATASET_ID, got '" + spec + "'");
    }
    const std::string domain = spec.substr(0, slash);
    const std::string dataset = spec.substr(slash + 1);
    log.info("fetching socrata dataset", {{"domain", domain}, {"dataset", dataset}});
    tables.push_back(fetch_socrata(domain, dataset, o.limit));
    run.input("socrata:" + dataset, spec);
  }
  index_tables(tables);
  const std::size_t total = tables.size();

  fs::create_directories(o.out_dir);
  auto result = filter_tables(std::move(tables), criteria);
  const fs::path manifest = o.manifest.empty() ? fs::path(o.out_dir) / "manifest.jsonl"
                                               : fs::path(o.manifest);
  {
    JsonlWriter w(manifest.string());
    for (const auto& t : result.kept) {
      const auto path = fs::path(o.out_dir) / (t.id + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InputError("cannot write " + path.string());
      write_csv(out, t);
      w.write(manifest_entry(t));
    }
    for (const auto& r : result.rejected) w.write(manifest_entry(r));
  }
  run.set_config({{"filter", to_json(criteria)}});
  run.output("tables", o.out_dir);
  run.output("manifest", manifest.string());
  run.count("tables", total);
  run.count("kept", result.kept.size());
  run.count("rejected", result.rejected.size());
  run.write(manifest_path_for(manifest));
  log.info("ingest done", {{"kept", result.kept.size()}, {"rejected", result.rejected.size()}});
  return kExitOk;
}

// ------------------------------------------------------------- fabricate

struct FabricateOptions {
  std::string tables;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string delimiter = ",";
  DataPaths data;
};

int cmd_fabricate(FabricateOptions o, const Globals& g, Logger& log, RunManifest& run) {
  FabricationConfig config = config_from_json(g.section("fabrication"));
  if (o.seed) config.seed = *o.seed;
  if (o.data.lookup.empty() && !config.lookup_path.empty()) o.data.lookup = config.lookup_path;
  if (o.data.acronyms.empty() && !config.acronym_path.empty()) o.data.acronyms = config.acronym_path;
  o.data.resolve();
  config.lookup_path = o.data.lookup;
  config.acronym_path = o.data.acronyms;
  config.validate();

  const auto lexicon = FrequencyLexicon::load_file(o.data.lexicon);
  const auto vocab = Vocabulary::build_file(o.data.vocab);
  Dictionaries dicts{LookupDict::load_file(o.data.lookup), AcronymDict::load_file(o.data.acronyms)};
  const auto tables = load_tables(o.tables, parse_delimiter(o.delimiter));

  const auto result = fabricate_corpus(tables, config, dicts, vocab, lexicon, std::max(1u, o.threads));
  write_pairs(o.out, result.pairs);

  run.set_seed(config.seed);
  ordered_json cfg = {{"fabrication", to_json(config)},
                      {"lexicon", o.data.lexicon},
                      {"vocab", o.data.vocab}};
  run.set_config(std::move(cfg));
  run.input("tables", o.tables);
  run.output("pairs", o.out);
  run.count("tables", result.stats.tables);
  run.count("headers", result.stats.headers);
  run.count("pairs", result.stats.pairs);
  run.count("skipped_uncurated", result.stats.skipped_uncurated);
  run.count("skipped_no_words", result.stats.skipped_no_words);
  run.write(manifest_path_for(o.out));
  log.info("fabricate done", {{"tables", result.stats.tables},
                              {"headers", result.stats.headers},
                              {"pairs", result.stats.pairs},
                              {"seed", config.seed}});
  return kExitOk;
}

// --------------------------------------------------- classify-difficulty

struct ClassifyOptions {
  std::string pairs;
  std::string out;
  std::string thresholds;
  std::string calibrate;
};

DifficultyThresholds thresholds_from(const Globals& g, const std::string& flag_value) {
  DifficultyThresholds t;
  if (!flag_value.empty()) {
    const auto v = parse_number_list(flag_value, 3, "--thresholds");
    t = {v[0], v[1], v[2]};
  } else if (auto d = g.section("difficulty"); d.contains("thresholds")) {
    try {
      const auto v = d.at("thresholds").get<std::vector<double>>();
      if (v.size() != 3) throw InputError("difficulty.thresholds needs three numbers");
      t = {v[0], v[1], v[2]};
    } catch (const json::exception& e) {
      throw InputError(std::string("bad difficulty config: ") + e.what());
    }
  }
  t.validate();
  return t;
}

int cmd_classify(const ClassifyOptions& o, const Globals& g, Logger& log, RunManifest& run,
                 std::ostream& out) {
  auto pairs = read_pairs(o.pairs);
  if (pairs.empty()) throw InputError("no pairs in " + o.pairs);
  DifficultyThresholds t;
  ordered_json cfg;
  if (!o.calibrate.empty()) {
    const auto v = parse_number_list(o.calibrate, 4, "--calibrate");
    std::vector<double> d;
    d.reserve(pairs.size());
    for (const auto& p : pairs) d.push_back(normalized_distance(p.query_name, p.logical_name));
    t = calibrate_thresholds(d, {v[0], v[1], v[2], v[3]});
    cfg["target_split"] = v;
  } else {
    t = thresholds_from(g, o.thresholds);
  }
  std::array<std::size_t, 4> counts{};
  for (auto& p : pairs) {
    p.difficulty = classify(p.query_name, p.logical_name, t);
    ++counts[static_cast<std::size_t>(*p.difficulty)];
  }
  const std::string dest = o.out.empty() ? o.pairs : o.out;
  const std::string tmp = dest + ".tmp";
  write_pairs(tmp, pairs);
  fs::rename(tmp, dest);

  cfg["thresholds"] = {t.t1, t.t2, t.t3};
  ordered_json split;
  for (auto l : kAllLevels) {
    const auto n = counts[static_cast<std::size_t>(l)];
    split[std::string(to_string(l))] = static_cast<double>(n) / static_cast<double>(pairs.size());
    run.count(std::string(to_string(l)), n);
  }
  cfg["achieved_split"] = split;
  out << ordered_json{{"thresholds", cfg["thresholds"]}, {"split", split}}.dump() << '\n';
  run.set_config(std::move(cfg));
  run.input("pairs", o.pairs);
  run.output("pairs", dest);
  run.count("pairs", pairs.size());
  run.write(manifest_path_for(dest));
  log.info("classified pairs", {{"pairs", pairs.size()}, {"t1", t.t1}, {"t2", t.t2}, {"t3", t.t3}});
  return kExitOk;
}

// ---------------------------------------------------------------- prompts

struct PromptsOptions {
  std::string pairs;
  std::string tables;
  std::string out;
  std::optional<std::size_t> k, n;
  std::string mode = "infer";
  bool demo = false;
  bool no_context = false;
  std::optional<std::uint64_t> sample_seed;
  std::string delimiter = ",";
};

int cmd_prompts(const PromptsOptions& o, const Globals& g, Logger& log, RunManifest& run) {
  PromptOptions opts;
  const json section = g.section("prompts");
  opts.k = o.k.value_or(section.value("k", kDefaultColumnsPerPrompt));
  opts.n = o.n.value_or(section.value("n", kDefaultSampledRows));
  if (opts.k == 0) throw InputError("--k must be at least 1");
  if (o.mode == "train") opts.mode = PromptMode::train;
  else if (o.mode == "infer") opts.mode = PromptMode::infer;
  else throw InputError("--mode must be train or infer");
  opts.with_demo = o.demo;
  opts.with_context = !o.no_context;
  opts.sample_seed = o.sample_seed;

  const auto pairs = read_pairs(o.pairs);
  std::vector<Table> tables;
  if (opts.with_context) {
    if (o.tables.empty()) throw InputError("--tables is required unless --no-context is given");
    tables = load_tables(o.tables, parse_delimiter(o.delimiter));
  }
  const auto table_idx = index_tables(tables);

  std::map<std::string, std::vector<NamePair>> by_table;
  for (const auto& p : pairs) by_table[p.table_id].push_back(p);

  std::size_t bundles = 0;
  JsonlWriter w(o.out);
  for (const auto& [id, group] : by_table) {
    Table stub;
    const Table* table = &stub;
    if (opts.with_context) {
      auto it = table_idx.find(id);
      if (it == table_idx.end()) throw InputError("no table '" + id + "' under " + o.tables);
      table = &tables[it->second];
    } else {
      stub.id = id;
    }
    for (const auto& b : build_bundles(*table, group, opts)) {
      w.write(to_json(b));
      ++bundles;
    }
  }
  ordered_json cfg = {{"k", opts.k},
                      {"n", opts.n},
                      {"mode", o.mode},
                      {"demo", opts.with_demo},
                      {"context", opts.with_context}};
  if (opts.sample_seed) {
    cfg["sample_seed"] = *opts.sample_seed;
    run.set_seed(*opts.sample_seed);
  }
  run.set_config(std::move(cfg));
  run.input("pairs", o.pairs);
  if (!o.tables.empty()) run.input("tables", o.tables);
  run.output("prompts", o.out);
  run.count("pairs", pairs.size());
  run.count("bundles", bundles);
  run.write(manifest_path_for(o.out));
  log.info("prompts written", {{"bundles", bundles}});
  return kExitOk;
}

// ------------------------------------------------------------------ infer

struct InferOptions {
  std::string prompts;
  std::string out;
  std::string raw;
  std::string stub;
  std::string pairs;
  std::string from_raw;
  std::uint64_t seed = 0;
  std::string endpoint;
  std::string model;
  std::optional<int> max_new_tokens, retries;
  std::optional<double> temperature, timeout;
  std::optional<std::size_t> max_in_flight;
  bool no_stop = false;
};

std::vector<PromptBundle> read_bundles(const std::string& path) {
  require_file(path, "prompts file");
  std::vector<PromptBundle> out;
  for_each_jsonl(path, [&](json&& j) { out.push_back(bundle_from_json(j)); });
  return out;
}

std::string join_answers(const std::vector<std::string>& items) {
  std::string s = " ";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += " | ";
    s += items[i];
  }
  s += '.';
  return s;
}

Completer make_stub(const InferOptions& o, const std::vector<NamePair>& pairs) {
  auto idx = std::make_shared<std::map<PairKey, std::string>>();
  for (const auto& p : pairs) (*idx)[{p.table_id, p.column_index}] = p.logical_name;
  auto golds_of = [idx](const PromptBundle& b) {
    std::vector<std::string> golds;
    for (auto c : b.column_indices) {
      auto it = idx->find({b.table_id, c});
      if (it == idx->end()) {
        throw InputError("no gold for " + b.table_id + " column " + std::to_string(c));
      }
      golds.push_back(it->second);
    }
    return golds;
  };
  if (o.stub == "oracle") {
    return [golds_of](const PromptBundle& b) { return Completion{join_answers(golds_of(b))}; };
  }
  if (o.stub == "identity") {
    return [](const PromptBundle& b) { return Completion{join_answers(b.query_names)}; };
  }
  if (o.stub == "scrambler") {
    const std::uint64_t seed = o.seed;
    return [golds_of, seed](const PromptBundle& b) {
      auto golds = golds_of(b);
      Rng rng(Rng::derive_seed(seed, b.bundle_id));
      for (std::size_t i = golds.size(); i > 1; --i) std::swap(golds[i - 1], golds[rng.below(i)]);
      return Completion{join_answers(golds)};
    };
  }
  throw InputError("--stub must be oracle, identity or scrambler");
}

EndpointConfig endpoint_from(const InferOptions& o, const Globals& g) {
  EndpointConfig c = endpoint_config_from_json(g.section("endpoint"));
  if (!o.endpoint.empty()) c.base_url = o.endpoint;
  if (!o.model.empty()) c.model = o.model;
  if (o.max_new_tokens) c.max_new_tokens = *o.max_new_tokens;
  if (o.retries) c.max_retries = *o.retries;
  if (o.temperature) c.temperature = *o.temperature;
  if (o.timeout) c.timeout_seconds = *o.timeout;
  if (o.max_in_flight) c.max_in_flight = *o.max_in_flight;
  if (o.no_stop) c.stop.clear();
  c.validate();
  return c;
}

ordered_json endpoint_json(const EndpointConfig& c) {
  return {{"base_url", c.base_url},
          {"model", c.model},
          {"max_new_tokens", c.max_new_tokens},
          {"temperature", c.temperature},
          {"stop", c.stop},
          {"timeout_seconds", c.timeout_seconds},
          {"max_retries", c.max_retries},
          {"max_in_flight", c.max_in_flight}};
}

// One prediction line per column of every bundle.
std::size_t write_predictions(const std::string& path, const std::vector<PromptBundle>& bundles,
                              const std::map<std::string, InferenceResult>& results,
                              std::size_t& extracted_bundles) {
  JsonlWriter w(path);
  std::size_t lines = 0;
  extracted_bundles = 0;
  for (const auto& b : bundles) {
    std::optional<std::vector<std::string>> answers;
    auto it = results.find(b.bundle_id);
    if (it != results.end() && it->second.completion) {
      answers = extract_answers(*it->second.completion, b.column_indices.size());
    }
    if (answers) ++extracted_bundles;
    for (std::size_t i = 0; i < b.column_indices.size(); ++i) {
      ordered_json j;
      j["table_id"] = b.table_id;
      j["column_index"] = b.column_indices[i];
      j["bundle_id"] = b.bundle_id;
      j["prediction"] = answers ? ordered_json((*answers)[i]) : ordered_json(nullptr);
      w.write(j);
      ++lines;
    }
  }
  return lines;
}

int cmd_infer(const InferOptions& o, const Globals& g, Logger& log, RunManifest& run) {
  const auto bundles = read_bundles(o.prompts);
  run.input("prompts", o.prompts);
  std::map<std::string, InferenceResult> results;
  std::size_t failures = 0;
  std::string raw_path;

  if (!o.from_raw.empty()) {
    require_file(o.from_raw, "raw completion log");
    for_each_jsonl(o.from_raw, [&](json&& j) {
      auto r = inference_result_from_json(j);
      results[r.bundle_id] = std::move(r);
    });
    run.input("raw", o.from_raw);
    run.set_config({{"mode", "from_raw"}});
  } else {
    Completer completer;
    std::size_t in_flight = 1;
    if (!o.stub.empty()) {
      if (o.pairs.empty()) throw InputError("--stub requires --pairs");
      const auto pairs = read_pairs(o.pairs);
      completer = make_stub(o, pairs);
      run.input("pairs", o.pairs);
      run.set_seed(o.seed);
      run.set_config({{"mode", "stub"}, {"stub", o.stub}});
    } else {
      const EndpointConfig cfg = endpoint_from(o, g);
      in_flight = cfg.max_in_flight;
      completer = [cfg](const PromptBundle& b) { return complete(b.prompt, cfg); };
      run.set_config({{"mode", "endpoint"}, {"endpoint", endpoint_json(cfg)}});
    }
    raw_path = o.raw.empty() ? o.out + ".raw.jsonl" : o.raw;
    JsonlWriter raw(raw_path);
    g_interrupted.store(false);
    auto previous = std::signal(SIGINT, on_interrupt);
    try {
      run_inference(
          bundles, completer, in_flight,
          [&](InferenceResult&& r) {
            raw.write(to_json(r));
            if (!r.completion) {
              ++failures;
              log.warn("bundle failed", {{"bundle_id", r.bundle_id}, {"error", r.error}});
            }
            results[r.bundle_id] = std::move(r);
          },
          &g_interrupted);
    } catch (...) {
      std::signal(SIGINT, previous);
      throw;
    }
    std::signal(SIGINT, previous);
    run.output("raw", raw_path);
  }

  std::size_t extracted = 0;
  const auto lines = write_predictions(o.out, bundles, results, extracted);
  run.output("predictions", o.out);
  run.count("bundles", bundles.size());
  run.count("predictions", lines);
  run.count("extracted_bundles", extracted);
  run.count("failed_bundles", failures);
  run.write(manifest_path_for(o.out));
  log.info("inference done", {{"bundles", bundles.size()},
                              {"extracted", extracted},
                              {"failed", failures}});
  if (g_interrupted.load()) return kExitEndpoint;
  return failures ? kExitEndpoint : kExitOk;
}

// ------------------------------------------------------------ score/report

struct ScoreOptions {
  std::string pairs;
  std::string preds;
  std::string out;
  std::string records;
  std::string thresholds;
  std::string convention = "all";
};

ScoreConvention convention_from(const std::string& s) {
  if (s == "all") return ScoreConvention::all_records;
  if (s == "extracted") return ScoreConvention::extracted_only;
  throw InputError("--convention must be all or extracted");
}

std::vector<EvalRecord> score_predictions(const std::vector<NamePair>& pairs,
                                          const std::string& preds_path,
                                          const DifficultyThresholds& thresholds,
                                          Logger& log) {
  require_file(preds_path, "predictions file");
  std::map<PairKey, std::optional<std::string>> preds;
  for_each_jsonl(preds_path, [&](json&& j) {
    try {
      PairKey key{j.at("table_id").get<std::string>(), j.at("column_index").get<std::size_t>()};
      const auto& p = j.at("prediction");
      preds[key] = p.is_null() ? std::nullopt : std::optional<std::string>(p.get<std::string>());
    } catch (const json::exception& e) {
      throw DecodeError(preds_path + ": malformed prediction: " + e.what());
    }
  });
  std::vector<EvalRecord> records;
  records.reserve(pairs.size());
  std::size_t missing = 0;
  for (const auto& p : pairs) {
    std::optional<std::string> pred;
    if (auto it = preds.find({p.table_id, p.column_index}); it != preds.end()) {
      pred = it->second;
      preds.erase(it);
    } else {
      ++missing;
    }
    const auto level = p.difficulty ? *p.difficulty
                                    : classify(p.query_name, p.logical_name, thresholds);
    records.push_back(score_record(p.table_id, p.column_index, std::move(pred), p.logical_name, level));
  }
  if (missing) log.warn("pairs without a prediction scored as failures", {{"count", missing}});
  if (!preds.empty()) log.warn("predictions without a matching pair ignored", {{"count", preds.size()}});
  return records;
}

int cmd_score(const ScoreOptions& o, const Globals& g, Logger& log, RunManifest& run,
              std::ostream& out) {
  const auto pairs = read_pairs(o.pairs);
  const auto thresholds = thresholds_from(g, o.thresholds);
  const auto records = score_predictions(pairs, o.preds, thresholds, log);
  const auto report = aggregate(records);
  if (!o.records.empty()) {
    JsonlWriter w(o.records);
    for (const auto& r : records) w.write(to_json(r));
    run.output("records", o.records);
  }
  const std::pair<std::string, EvalReport> col{"preds", report};
  out << render_report(std::span(&col, 1), convention_from(o.convention));
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot write " + o.out);
    f << to_json(report).dump(2) << '\n';
    run.output("report", o.out);
  }
  run.set_config({{"thresholds", {thresholds.t1, thresholds.t2, thresholds.t3}},
                  {"convention", o.convention}});
  run.input("pairs", o.pairs);
  run.input("preds", o.preds);
  run.count("records", records.size());
  run.count("extracted", report.overall.extracted_n);
  if (!o.out.empty()) run.write(manifest_path_for(o.out));
  log.info("scored", {{"records", records.size()},
                      {"em", report.overall.all.em * 100.0},
                      {"f1", report.overall.all.f1 * 100.0}});
  return kExitOk;
}

struct ReportOptions {
  std::string pairs;
  std::string preds_q;
  std::string preds_tq;
  std::string out;
  std::string json_out;
  std::string thresholds;
  std::string convention = "all";
};

int cmd_report(const ReportOptions& o, const Globals& g, Logger& log, RunManifest& run,
               std::ostream& out) {
  if (o.preds_q.empty() && o.preds_tq.empty()) {
    throw InputError("report needs --preds-q and/or --preds-tq");
  }
  const auto pairs = read_pairs(o.pairs);
  const auto thresholds = thresholds_from(g, o.thresholds);
  std::vector<std::pair<std::string, EvalReport>> columns;
  ordered_json j;
  if (!o.preds_q.empty()) {
    const auto records = score_predictions(pairs, o.preds_q, thresholds, log);
    columns.emplace_back("q", aggregate(records));
    j["q"] = to_json(columns.back().second);
    run.input("preds_q", o.preds_q);
  }
  if (!o.preds_tq.empty()) {
    const auto records = score_predictions(pairs, o.preds_tq, thresholds, log);
    columns.emplace_back("t'+q", aggregate(records));
    j["t'+q"] = to_json(columns.back().second);
    run.input("preds_tq", o.preds_tq);
  }
  const std::string text = render_report(columns, convention_from(o.convention));
  out << text;
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot write " + o.out);
    f << text;
    run.output("report", o.out);
  }
  if (!o.json_out.empty()) {
    std::ofstream f(o.json_out);
    if (!f) throw InputError("cannot write " + o.json_out);
    f << j.dump(2) << '\n';
    run.output("json", o.json_out);
  }
  run.set_config({{"thresholds", {thresholds.t1, thresholds.t2, thresholds.t3}},
                  {"convention", o.convention}});
  run.input("pairs", o.pairs);
  run.count("pairs", pairs.size());
  if (!o.out.empty()) run.write(manifest_path_for(o.out));
  else if (!o.json_out.empty()) run.write(manifest_path_for(o.json_out));
  return kExitOk;
}

}  // namespace

std::string default_data_dir() {
  if (const char* env = std::getenv("NAMEGUESS_DATA_DIR"); env && *env) return env;
  std::error_code ec;
  if (fs::is_regular_file(fs::path(NAMEGUESS_INSTALL_DATA_DIR) / "lexicon.txt", ec)) {
    return NAMEGUESS_INSTALL_DATA_DIR;
  }
  return NAMEGUESS_SOURCE_DATA_DIR;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Column-name abbreviation corpus builder and expansion evaluator", "nameguess"};
  app.set_version_flag("--version", NAMEGUESS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON config with optional sections "
                                            "fabrication, filter, difficulty, prompts, endpoint");
  app.add_flag("--log-json", g.log_json, "Emit logs as JSON lines on stderr");

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Load CSV files or Socrata datasets and filter them");
  c_ingest->add_option("inputs", ingest.inputs, "CSV files or directories");
  c_ingest->add_option("--socrata", ingest.socrata, "DOMAIN/DATASET_ID to fetch (repeatable)");
  c_ingest->add_option("--limit", ingest.limit, "Row limit per Socrata request");
  c_ingest->add_option("--out-dir", ingest.out_dir, "Directory for kept tables")->required();
  c_ingest->add_option("--manifest", ingest.manifest, "Corpus manifest (default OUT_DIR/manifest.jsonl)");
  c_ingest->add_option("--delimiter", ingest.delimiter, "CSV field delimiter");
  c_ingest->add_option("--min-rows", ingest.min_rows);
  c_ingest->add_option("--min-cols", ingest.min_cols);
  c_ingest->add_option("--max-rows", ingest.max_rows, "Rows retained per kept table");
  c_ingest->add_option("--max-nan-fraction", ingest.max_nan);
  c_ingest->add_option("--max-duplicate-fraction", ingest.max_dup);

  FabricateOptions fab;
  auto* c_fab = app.add_subcommand("fabricate", "Abbreviate well-curated headers into name pairs");
  c_fab->add_option("--tables", fab.tables, "Directory of CSV tables")->required();
  c_fab->add_option("--out", fab.out, "Output pairs (JSON lines)")->required();
  c_fab->add_option("--seed", fab.seed, "Random seed (overrides the config file)");
  c_fab->add_option("--threads", fab.threads, "Worker threads");
  c_fab->add_option("--delimiter", fab.delimiter, "CSV field delimiter");
  add_data_options(c_fab, fab.data, true);

  ClassifyOptions cls;
  auto* c_cls = app.add_subcommand("classify-difficulty", "Label pairs Easy/Medium/Hard/Extra Hard");
  c_cls->add_option("--pairs", cls.pairs, "Pairs file, annotated in place")->required();
  c_cls->add_option("--out", cls.out, "Write annotated pairs here instead");
  auto* o_thr = c_cls->add_option("--thresholds", cls.thresholds, "t1,t2,t3 cutpoints");
  c_cls->add_option("--calibrate", cls.calibrate, "Target split easy,medium,hard,extra_hard")
      ->excludes(o_thr);

  PromptsOptions pr;
  auto* c_pr = app.add_subcommand("prompts", "Build prompt bundles from pairs and tables");
  c_pr->add_option("--pairs", pr.pairs)->required();
  c_pr->add_option("--tables", pr.tables, "Directory of CSV tables");
  c_pr->add_option("--out", pr.out)->required();
  c_pr->add_option("--k", pr.k, "Columns per prompt (default 10)");
  c_pr->add_option("--n", pr.n, "Sampled rows per prompt (default 10)");
  c_pr->add_option("--mode", pr.mode, "train or infer")->check(CLI::IsMember({"train", "infer"}));
  c_pr->add_flag("--demo", pr.demo, "Prepend the one-shot demonstration");
  c_pr->add_flag("--no-context", pr.no_context, "Task prompt only, without table content");
  c_pr->add_option("--sample-seed", pr.sample_seed, "Sample cells at random with this seed");
  c_pr->add_option("--delimiter", pr.delimiter, "CSV field delimiter");

  InferOptions inf;
  auto* c_inf = app.add_subcommand("infer", "Run prompts through an endpoint or a stub model");
  c_inf->add_option("--prompts", inf.prompts)->required();
  c_inf->add_option("--out", inf.out, "Predictions (JSON lines)")->required();
  c_inf->add_option("--raw", inf.raw, "Raw completion log (default OUT.raw.jsonl)");
  auto* o_stub = c_inf->add_option("--stub", inf.stub, "oracle, identity or scrambler")
                     ->check(CLI::IsMember({"oracle", "identity", "scrambler"}));
  c_inf->add_option("--pairs", inf.pairs, "Pairs supplying golds to the stubs");
  c_inf->add_option("--from-raw", inf.from_raw, "Re-extract answers from a raw log offline")
      ->excludes(o_stub);
  c_inf->add_option("--seed", inf.seed, "Seed for the scrambler stub");
  c_inf->add_option("--endpoint", inf.endpoint, "Base URL of a completion server");
  c_inf->add_option("--model", inf.model);
  c_inf->add_option("--max-new-tokens", inf.max_new_tokens);
  c_inf->add_option("--temperature", inf.temperature);
  c_inf->add_option("--timeout", inf.timeout, "Seconds per request");
  c_inf->add_option("--retries", inf.retries);
  c_inf->add_option("--max-in-flight", inf.max_in_flight);
  c_inf->add_flag("--no-stop", inf.no_stop, "Do not send the '.' stop sequence");

  ScoreOptions sc;
  auto* c_sc = app.add_subcommand("score", "Score predictions with EM and token F1");
  c_sc->add_option("--pairs", sc.pairs)->required();
  c_sc->add_option("--preds", sc.preds)->required();
  c_sc->add_option("--out", sc.out, "Report JSON");
  c_sc->add_option("--records", sc.records, "Per-example scores (JSON lines)");
  c_sc->add_option("--thresholds", sc.thresholds, "Cutpoints for pairs without a level");
  c_sc->add_option("--convention", sc.convention, "all or extracted");

  ReportOptions rp;
  auto* c_rp = app.add_subcommand("report", "Render EM/F1 tables, task-only vs with context");
  c_rp->add_option("--pairs", rp.pairs)->required();
  c_rp->add_option("--preds-q", rp.preds_q, "Predictions from task-only prompts");
  c_rp->add_option("--preds-tq", rp.preds_tq, "Predictions from prompts with table context");
  c_rp->add_option("--out", rp.out, "Write the rendered table here too");
  c_rp->add_option("--json", rp.json_out, "Write both reports as JSON");
  c_rp->add_option("--thresholds", rp.thresholds, "Cutpoints for pairs without a level");
  c_rp->add_option("--convention", rp.convention, "all or extracted");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  Logger log(err, g.log_json);
  try {
    if (!g.config_path.empty()) {
      g.config = read_json_file(g.config_path);
      if (!g.config.is_object()) throw InputError("--config must hold a JSON object");
    }
    CLI::App* chosen = app.get_subcommands().front();
    RunManifest run(chosen->get_name());
    run.set_argv(args);
    if (!g.config_path.empty()) run.input("config", g.config_path);

    if (chosen == c_ingest) return cmd_ingest(ingest, g, log, run);
    if (chosen == c_fab) return cmd_fabricate(fab, g, log, run);
    if (chosen == c_cls) return cmd_classify(cls, g, log, run, out);
    if (chosen == c_pr) return cmd_prompts(pr, g, log, run);
    if (chosen == c_inf) return cmd_infer(inf, g, log, run);
    if (chosen == c_sc) return cmd_score(sc, g, log, run, out);
    if (chosen == c_rp) return cmd_report(rp, g, log, run, out);
    return kExitInput;
  } catch (const TransportError& e) {
    log.error(e.what(), {{"status", e.status()}});
    return kExitEndpoint;
  } catch (const InputError& e) {
    log.error(e.what());
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    log.error(e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    log.error(std::string("unexpected failure: ") + e.what());
    return kExitInput;
  }
}

}  // namespace nameguess::cli
