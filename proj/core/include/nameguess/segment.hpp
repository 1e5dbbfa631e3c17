#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace nameguess {

/// Lowercase words ordered by descending corpus frequency; the word's rank is
/// its line position. Supplies the segmentation costs.
class FrequencyLexicon {
 public:
  /// One word per line, most frequent first. Lines that are not purely
  /// alphabetic are skipped and counted; repeated words keep their first rank.
  /// Throws InputError when no usable word remains.
  static FrequencyLexicon load(std::istream& source);
  static FrequencyLexicon load_file(const std::string& path);
  static FrequencyLexicon from_words(const std::vector<std::string>& words);

  std::optional<std::size_t> rank(std::string_view word) const;
  bool contains(std::string_view word) const { return rank(word).has_value(); }

  /// ln((rank + 1) * ln N): the Zipf-law cost of a known word.
  double word_cost(std::size_t rank) const;
  /// Penalty charged per character not covered by any lexicon word.
  double unknown_char_cost() const noexcept { return unknown_char_cost_; }

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t skipped_lines() const noexcept { return skipped_; }
  std::size_t max_word_length() const noexcept { return max_len_; }
  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  void finalize();

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> rank_;
  std::size_t skipped_ = 0;
  std::size_t max_len_ = 0;
  double log_n_ = 1.0;
  double unknown_char_cost_ = 0.0;
};

/// Curation vocabulary: the set of words a logical name may be built from.
class Vocabulary {
 public:
  static constexpr std::size_t kDefaultMinWordLength = 3;

  /// Keeps lines that are alphabetic after lowercasing and at least
  /// `min_word_len` long. Throws InputError when nothing survives.
  static Vocabulary build(std::istream& wordlist,
                          std::size_t min_word_len = kDefaultMinWordLength);
  static Vocabulary build_file(const std::string& path,
                               std::size_t min_word_len = kDefaultMinWordLength);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t min_word_len() const noexcept { return min_word_len_; }

 private:
  std::unordered_set<std::string> entries_;
  std::size_t min_word_len_ = kDefaultMinWordLength;
};

using TokenSeq = std::vector<std::string>;

/// Splits on delimiters (any ASCII character that is neither a letter nor a
/// digit), letter-case boundaries ("zipCode", "HTTPServer") and letter/digit
/// boundaries. Pieces keep their original casing; no dictionary is used.
std::vector<std::string> split_on_boundaries(std::string_view name);

/// split_on_boundaries followed by dictionary segmentation of each
/// alphabetic piece. Pieces keep their original casing, so concatenating the
/// result gives the input with delimiters removed.
std::vector<std::string> split_identifier_surface(std::string_view name,
                                                  const FrequencyLexicon& lexicon);

/// Lowercased split_identifier_surface.
TokenSeq split_identifier(std::string_view name, const FrequencyLexicon& lexicon);

/// Minimum-cost segmentation of one lowercase run. Characters no lexicon word
/// covers are merged into a single token.
std::vector<std::string> segment_run(std::string_view run, const FrequencyLexicon& lexicon);

/// Base form of a lowercase word: irregular-form table, then plural suffix
/// rules. Idempotent.
std::string lemmatize(std::string_view token);

/// Whether `name` is well-curated: the whole lowercased name is a vocabulary
/// entry, or every token is a digit run, a function word (see
/// is_function_word), or (after lemmatization) in the vocabulary.
bool is_logical_name(std::string_view name, const Vocabulary& vocab,
                     const FrequencyLexicon& lexicon);

namespace detail {
/// The embedded irregular-form table (inflected form, base form).
std::vector<std::pair<std::string, std::string>> irregular_lemma_table();
}  // namespace detail

bool is_digits(std::string_view s) noexcept;
/// Closed-class connectives allowed inside logical names ("date of birth").
bool is_function_word(std::string_view lower) noexcept;
bool is_alpha(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

}  // namespace nameguess
