#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nameguess/abbrev.hpp"
#include "nameguess/corpus.hpp"
#include "nameguess/difficulty.hpp"
#include "nameguess/segment.hpp"

namespace nameguess {

/// One (query name, logical name) example tied to a table column.
struct NamePair {
  std::string table_id;
  std::size_t column_index = 0;
  std::string query_name;    // x
  std::string logical_name;  // y
  AbbreviationTrace trace;
  std::optional<DifficultyLevel> difficulty;
};

nlohmann::ordered_json to_json(const NamePair& pair);
NamePair pair_from_json(const nlohmann::json& j);

std::vector<NamePair> read_pairs(const std::string& path);
void write_pairs(const std::string& path, std::span<const NamePair> pairs);

struct FabricationStats {
  std::size_t tables = 0;
  std::size_t headers = 0;
  std::size_t pairs = 0;
  std::size_t skipped_uncurated = 0;  // failed the logical-name check
  std::size_t skipped_no_words = 0;   // curated but nothing left to expand ("2020")
};

struct FabricationResult {
  std::vector<NamePair> pairs;  // sorted by (table_id, column_index)
  FabricationStats stats;
};

/// Turns every well-curated header into a (query, logical) pair. Each table
/// gets its own generator seeded from (config.seed, table id) and its own
/// word cache, so the output does not depend on table order or `threads`.
FabricationResult fabricate_corpus(std::span<const Table> tables,
                                   const FabricationConfig& config, const Dictionaries& dicts,
                                   const Vocabulary& vocab, const FrequencyLexicon& lexicon,
                                   unsigned threads = 1);

}  // namespace nameguess
