#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "nameguess/rng.hpp"

namespace nameguess {

enum class Method : std::uint8_t { keep, lookup, rule };
enum class Rule : std::uint8_t { prefix, vowel_drop, random_drop };
enum class CaseStyle : std::uint8_t { camel, pascal, snake, simple };
enum class SnakeCase : std::uint8_t { upper, lower, as_produced };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Rule r) noexcept;
std::string_view to_string(CaseStyle s) noexcept;
std::string_view to_string(SnakeCase s) noexcept;
Method method_from_string(std::string_view s);
Rule rule_from_string(std::string_view s);
CaseStyle case_style_from_string(std::string_view s);
SnakeCase snake_case_from_string(std::string_view s);

/// Every knob of the abbreviation generator. Weight vectors are indexed by
/// the corresponding enum.
struct FabricationConfig {
  std::array<double, 3> p_method{0.3, 0.6, 0.1};      // keep, lookup, rule
  std::array<double, 3> p_rule{0.2, 0.4, 0.4};        // prefix, vowel drop, random drop
  std::array<double, 4> p_case{0.25, 0.25, 0.25, 0.25};  // camel, pascal, snake, simple
  std::array<double, 3> p_snake_case{1.0 / 3, 1.0 / 3, 1.0 / 3};  // upper, lower, as produced
  int k_min = 1;
  int k_max = 5;
  double p_acronym = 0.5;
  double p_year_shorten = 0.5;
  double p_word_removal = 0.05;
  double p_reorder_year_front = 0.05;
  std::vector<std::string> removable_words{"name", "code", "value", "id"};
  std::uint64_t seed = 0;
  std::string lookup_path;
  std::string acronym_path;

  /// Throws InputError unless every weight vector sums to 1 (within 1e-9)
  /// with non-negative entries, 1 <= k_min <= k_max <= 5, and every
  /// probability lies in [0, 1].
  void validate() const;
};

nlohmann::ordered_json to_json(const FabricationConfig& config);

/// Overrides fields of `base` with the keys present in `j`. Unknown keys are
/// an InputError. The result is validated.
FabricationConfig config_from_json(const nlohmann::json& j, FabricationConfig base = {});

/// Longest dictionary phrase found at a token position.
struct PhraseMatch {
  std::size_t words = 0;  // tokens consumed
  std::string key;        // the matched phrase, space-joined
};

/// Expansion -> abbreviation candidates. Keys are lowercase words or
/// space-separated phrases.
class LookupDict {
 public:
  /// "word<TAB>abbr1|abbr2|..." per line; blank lines and lines starting with
  /// '#' are ignored. Throws ParseError on a malformed line.
  static LookupDict load(std::istream& source);
  static LookupDict load_file(const std::string& path);

  void add(std::string key, std::vector<std::string> candidates);
  const std::vector<std::string>* find(std::string_view key) const;
  std::optional<PhraseMatch> match(std::span<const std::string> lower_words,
                                   std::size_t pos) const;

  std::size_t size() const noexcept { return map_.size(); }
  const std::unordered_map<std::string, std::vector<std::string>>& entries() const noexcept {
    return map_;
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> map_;
  std::size_t max_words_ = 1;
};

/// Multi-word phrase -> acronym ("date of birth" -> "dob").
class AcronymDict {
 public:
  /// "phrase<TAB>acronym" per line. Phrases need at least two words and
  /// acronyms must be alphabetic; violations throw ParseError.
  static AcronymDict load(std::istream& source);
  static AcronymDict load_file(const std::string& path);

  void add(std::string phrase, std::string acronym);
  const std::string* find(std::string_view phrase) const;
  std::optional<PhraseMatch> match(std::span<const std::string> lower_words,
                                   std::size_t pos) const;

  std::size_t size() const noexcept { return map_.size(); }

 private:
  std::unordered_map<std::string, std::string> map_;
  std::size_t max_words_ = 2;
};

struct Dictionaries {
  LookupDict lookup;
  AcronymDict acronyms;
};

Method select_method(Rng& rng, std::span<const double, 3> weights);
Rule select_rule(Rng& rng, std::span<const double, 3> weights);

/// Keeps the first min(k, len) characters.
std::string rule1_prefix(std::string_view word, int k);

/// Removes the rightmost non-leading vowel (a, e, i, o, u) until the word is
/// at most k long or no such vowel is left.
std::string rule2_vowel_drop(std::string_view word, int k);

/// While longer than k: collapse runs of a repeated character, then delete
/// random non-leading vowels, then random non-leading consonants. The first
/// character always survives.
std::string rule3_random_drop(std::string_view word, int k, Rng& rng);

std::string apply_rule(Rule rule, std::string_view word, int k, Rng& rng);

/// Uniformly chosen candidate for `word`, or nullopt when it has no entry.
std::optional<std::string> lookup_abbreviation(std::string_view word, const LookupDict& dict,
                                               Rng& rng);

/// A four-digit number in [1000, 2999].
bool is_year(std::string_view token) noexcept;

/// With probability p a year becomes its last two digits; any other token is
/// returned unchanged and consumes no randomness.
std::string shorten_year(std::string_view token, Rng& rng, double p);

struct AcronymHit {
  std::string phrase;
  std::string acronym;
  std::size_t position = 0;  // index of the acronym in the output words
};

struct AcronymResult {
  std::vector<std::string> words;
  std::vector<bool> frozen;  // true where an acronym replaced a phrase
  std::vector<AcronymHit> hits;
  bool fired = false;
};

/// With probability p, replaces every longest dictionary phrase (matched
/// case-insensitively, left to right) by its upper-cased acronym.
AcronymResult acronym_extract(std::span<const std::string> words, const AcronymDict& dict,
                              Rng& rng, double p);

/// Joins abbreviated words. camel: "curBal"; pascal: "CurBal"; snake: joined
/// by '_' and cased per `snake_case`; simple: lowercase concatenation.
/// Throws InputError for an empty list.
std::string combine(std::span<const std::string> words, CaseStyle style,
                    SnakeCase snake_case = SnakeCase::as_produced);

/// How a word reached its abbreviated form.
enum class Via : std::uint8_t { keep, lookup, rule, cache, year, verbatim, acronym };
std::string_view to_string(Via v) noexcept;
Via via_from_string(std::string_view s);

struct WordTrace {
  std::string source;  // word or phrase as it appeared in the header
  std::string output;
  Via via = Via::keep;
};

/// Everything drawn while abbreviating one header. `words` is in output
/// order, so replay(trace) reproduces the query name.
struct AbbreviationTrace {
  Method method = Method::keep;
  Rule rule = Rule::prefix;
  int k = 1;
  CaseStyle style = CaseStyle::snake;
  SnakeCase snake_case = SnakeCase::as_produced;
  bool acronym_fired = false;
  std::vector<AcronymHit> acronym_hits;
  std::vector<std::string> removed;
  bool reordered = false;
  std::vector<WordTrace> words;
};

std::string replay(const AbbreviationTrace& trace);
nlohmann::ordered_json to_json(const AbbreviationTrace& trace);
AbbreviationTrace trace_from_json(const nlohmann::json& j);

/// Per-table memory of how each word was abbreviated, so a word shared by
/// several columns of one table gets one form.
class TableCache {
 public:
  struct Entry {
    bool kept = false;  // kept verbatim: reuse the current surface form
    std::string form;
  };

  const Entry* find(const std::string& key) const;
  void remember(const std::string& key, Entry entry);
  void clear() { entries_.clear(); }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

struct AbbreviationResult {
  std::string query_name;
  AbbreviationTrace trace;
};

/// Abbreviates one well-curated header given as surface-cased tokens.
/// Header-level draws happen first in a fixed order (method, rule, k, case
/// style, snake casing), then acronym extraction, word removal, the per-word
/// methods, year shortening and the year-to-front reorder.
AbbreviationResult abbreviate_header(std::span<const std::string> words,
                                     const FabricationConfig& config,
                                     const Dictionaries& dicts, TableCache& cache, Rng& rng);

}  // namespace nameguess
