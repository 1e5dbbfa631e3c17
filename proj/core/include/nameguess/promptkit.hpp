#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nameguess/corpus.hpp"
#include "nameguess/fabricate.hpp"
#include "nameguess/rng.hpp"

namespace nameguess {

inline constexpr std::size_t kDefaultColumnsPerPrompt = 10;  // K
inline constexpr std::size_t kDefaultSampledRows = 10;       // N
inline constexpr std::size_t kMaxCellChars = 20;

inline constexpr std::string_view kTaskPrefix = "As abbreviations of column names from a table, ";
inline constexpr std::string_view kDemonstration =
    "As abbreviations of column names from a table, c_name | pCd | dt stand for "
    "Customer Name | Product Code | Date.";

/// First `n` distinct present values of a column in row order, each cut to
/// its first 20 bytes.
std::vector<std::string> sample_cells(const Table& table, std::size_t column_index,
                                      std::size_t n);

/// `n` distinct present values drawn uniformly without replacement, kept in
/// row order.
std::vector<std::string> sample_cells_random(const Table& table, std::size_t column_index,
                                             std::size_t n, Rng& rng);

/// Consecutive groups of at most k indices. Throws InputError for k == 0.
std::vector<std::vector<std::size_t>> chunk_columns(std::span<const std::size_t> columns,
                                                    std::size_t k);
std::vector<std::vector<std::size_t>> chunk_columns(const Table& table, std::size_t k);

/// One column of the linearized context: the name shown to the model and its
/// sampled values.
struct ContextColumn {
  std::string query_name;
  std::vector<std::string> values;
};

/// "Column names: x1, ..., xK <SEP> row 1: c11, ..., cK1 <SEP> row 2: ...".
/// Renders min(n, longest sample) rows; a column with fewer samples renders
/// empty slots.
std::string linearize_context(std::span<const ContextColumn> columns, std::size_t n);

/// Context of a column group of `table`, with the group's query names.
std::string linearize_context(const Table& table, std::span<const std::size_t> group,
                              std::span<const std::string> query_names, std::size_t n);

/// context + "\n" + "As abbreviations ..., x1|...|xK stand for y1|...|yK."
/// An empty context yields the task sentence alone. Throws InputError when the
/// lists differ in length or are empty.
std::string build_training_prompt(std::string_view context,
                                  std::span<const std::string> queries,
                                  std::span<const std::string> golds);

/// [demonstration + "\n"] + context + "\n" + "As abbreviations ..., x1|...|xK
/// stand for". Throws InputError for an empty query list.
std::string build_inference_prompt(std::string_view context,
                                   std::span<const std::string> queries, bool with_demo);

/// Cuts the completion at the first sentence-ending period (followed by end
/// of text, a newline, or a space and an uppercase letter), at a newline, or
/// at an end-of-sequence marker, then splits on '|'. Returns nullopt unless
/// exactly k non-empty answers result.
std::optional<std::vector<std::string>> extract_answers(std::string_view completion,
                                                        std::size_t k);

enum class PromptMode { train, infer };

struct PromptOptions {
  std::size_t k = kDefaultColumnsPerPrompt;
  std::size_t n = kDefaultSampledRows;
  PromptMode mode = PromptMode::infer;
  bool with_demo = false;
  bool with_context = true;  // false: task prompt only (the "q" setting)
  std::optional<std::uint64_t> sample_seed;  // random cell sampling when set
};

/// A prompt for up to K columns of one table.
struct PromptBundle {
  std::string bundle_id;  // "<table_id>#<chunk>"
  std::string table_id;
  std::vector<std::size_t> column_indices;
  std::vector<std::string> query_names;
  std::string context;
  std::string prompt;
  std::optional<std::vector<std::string>> golds;
  bool demo_included = false;
};

nlohmann::ordered_json to_json(const PromptBundle& bundle);
PromptBundle bundle_from_json(const nlohmann::json& j);

/// Bundles for every pair of one table. `pairs` must all belong to `table`;
/// they are chunked in column order.
std::vector<PromptBundle> build_bundles(const Table& table, std::span<const NamePair> pairs,
                                        const PromptOptions& options);

}  // namespace nameguess
