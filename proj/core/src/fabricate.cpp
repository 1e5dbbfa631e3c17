#include "nameguess/fabricate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "nameguess/error.hpp"
#include "nameguess/jsonl.hpp"

namespace nameguess {

nlohmann::ordered_json to_json(const NamePair& p) {
  nlohmann::ordered_json j;
  j["table_id"] = p.table_id;
  j["column_index"] = p.column_index;
  j["query_name"] = p.query_name;
  j["logical_name"] = p.logical_name;
  j["trace"] = to_json(p.trace);
  j["difficulty"] = p.difficulty ? nlohmann::ordered_json(to_string(*p.difficulty))
                                 : nlohmann::ordered_json(nullptr);
  return j;
}

NamePair pair_from_json(const nlohmann::json& j) {
  NamePair p;
  try {
    p.table_id = j.at("table_id").get<std::string>();
    p.column_index = j.at("column_index").get<std::size_t>();
    p.query_name = j.at("query_name").get<std::string>();
    p.logical_name = j.at("logical_name").get<std::string>();
    if (auto it = j.find("trace"); it != j.end() && !it->is_null()) {
      p.trace = trace_from_json(*it);
    }
    if (auto it = j.find("difficulty"); it != j.end() && !it->is_null()) {
      p.difficulty = difficulty_from_string(it->get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed name pair: ") + e.what());
  }
  return p;
}

std::vector<NamePair> read_pairs(const std::string& path) {
  std::vector<NamePair> pairs;
  for_each_jsonl(path, [&](nlohmann::json&& j) { pairs.push_back(pair_from_json(j)); });
  return pairs;
}

void write_pairs(const std::string& path, std::span<const NamePair> pairs) {
  JsonlWriter out(path);
  for (const auto& p : pairs) out.write(to_json(p));
}

namespace {

struct TableOutput {
  std::vector<NamePair> pairs;
  FabricationStats stats;
};

TableOutput fabricate_table(const Table& table, const FabricationConfig& config,
                            const Dictionaries& dicts, const Vocabulary& vocab,
                            const FrequencyLexicon& lexicon) {
  TableOutput out;
  out.stats.tables = 1;
  Rng rng(Rng::derive_seed(config.seed, table.id));
  TableCache cache;
  for (std::size_t c = 0; c < table.headers.size(); ++c) {
    const std::string& header = table.headers[c];
    ++out.stats.headers;
    if (!is_logical_name(header, vocab, lexicon)) {
      ++out.stats.skipped_uncurated;
      continue;
    }
    if (normalize_for_distance(header).empty()) {
      ++out.stats.skipped_no_words;
      continue;
    }
    const auto words = split_identifier_surface(header, lexicon);
    auto result = abbreviate_header(words, config, dicts, cache, rng);
    NamePair pair;
    pair.table_id = table.id;
    pair.column_index = c;
    pair.query_name = std::move(result.query_name);
    pair.logical_name = header;
    pair.trace = std::move(result.trace);
    out.pairs.push_back(std::move(pair));
    ++out.stats.pairs;
  }
  return out;
}

}  // namespace

FabricationResult fabricate_corpus(std::span<const Table> tables,
                                   const FabricationConfig& config, const Dictionaries& dicts,
                                   const Vocabulary& vocab, const FrequencyLexicon& lexicon,
                                   unsigned threads) {
  config.validate();
  std::vector<TableOutput> per_table(tables.size());
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tables.size(), 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      per_table[i] = fabricate_table(tables[i], config, dicts, vocab, lexicon);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(tables.size());
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < tables.size(); i = next++) {
            try {
              per_table[i] = fabricate_table(tables[i], config, dicts, vocab, lexicon);
            } catch (...) {
              errors[i] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  FabricationResult result;
  for (auto& t : per_table) {
    result.stats.tables += t.stats.tables;
    result.stats.headers += t.stats.headers;
    result.stats.pairs += t.stats.pairs;
    result.stats.skipped_uncurated += t.stats.skipped_uncurated;
    result.stats.skipped_no_words += t.stats.skipped_no_words;
    std::move(t.pairs.begin(), t.pairs.end(), std::back_inserter(result.pairs));
  }
  std::stable_sort(result.pairs.begin(), result.pairs.end(),
                   [](const NamePair& a, const NamePair& b) {
                     if (a.table_id != b.table_id) return a.table_id < b.table_id;
                     return a.column_index < b.column_index;
                   });
  return result;
}

}  // namespace nameguess
