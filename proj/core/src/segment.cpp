#include "nameguess/segment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>

#include "nameguess/error.hpp"

namespace nameguess {

namespace {

enum class CharClass { lower, upper, other_letter, digit, delimiter };

CharClass classify_char(unsigned char c) noexcept {
  if (c >= 'a' && c <= 'z') return CharClass::lower;
  if (c >= 'A' && c <= 'Z') return CharClass::upper;
  if (c >= '0' && c <= '9') return CharClass::digit;
  if (c >= 0x80) return CharClass::other_letter;  // UTF-8 continuation or lead byte
  return CharClass::delimiter;
}

bool is_letter(CharClass k) noexcept {
  return k == CharClass::lower || k == CharClass::upper || k == CharClass::other_letter;
}

std::string trim_line(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
    line.pop_back();
  }
  std::size_t start = 0;
  while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
  return line.substr(start);
}

}  // namespace

bool is_digits(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c >= '0' && c <= '9';
  });
}

bool is_alpha(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// ---------------------------------------------------------------------------
// FrequencyLexicon

FrequencyLexicon FrequencyLexicon::load(std::istream& source) {
  FrequencyLexicon lex;
  std::string line;
  while (std::getline(source, line)) {
    line = trim_line(std::move(line));
    if (line.empty()) continue;
    if (!is_alpha(line)) {
      ++lex.skipped_;
      continue;
    }
    line = to_lower(line);
    if (lex.rank_.emplace(line, lex.words_.size()).second) lex.words_.push_back(line);
  }
  if (lex.words_.empty()) throw InputError("frequency lexicon is empty");
  lex.finalize();
  return lex;
}

FrequencyLexicon FrequencyLexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file: " + path);
  return load(in);
}

FrequencyLexicon FrequencyLexicon::from_words(const std::vector<std::string>& words) {
  FrequencyLexicon lex;
  for (const auto& w : words) {
    if (!is_alpha(w)) {
      ++lex.skipped_;
      continue;
    }
    auto lw = to_lower(w);
    if (lex.rank_.emplace(lw, lex.words_.size()).second) lex.words_.push_back(lw);
  }
  if (lex.words_.empty()) throw InputError("frequency lexicon is empty");
  lex.finalize();
  return lex;
}

void FrequencyLexicon::finalize() {
  max_len_ = 0;
  for (const auto& w : words_) max_len_ = std::max(max_len_, w.size());
  log_n_ = std::log(static_cast<double>(std::max<std::size_t>(words_.size(), 2)));
  // Ten times the cost of the rarest possible word: any covering by known
  // words beats leaving a character unexplained.
  unknown_char_cost_ = 10.0 * std::log((static_cast<double>(words_.size()) + 1.0) * log_n_);
}

std::optional<std::size_t> FrequencyLexicon::rank(std::string_view word) const {
  auto it = rank_.find(std::string(word));
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

double FrequencyLexicon::word_cost(std::size_t rank) const {
  return std::log((static_cast<double>(rank) + 1.0) * log_n_);
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary Vocabulary::build(std::istream& wordlist, std::size_t min_word_len) {
  Vocabulary vocab;
  vocab.min_word_len_ = min_word_len;
  std::string line;
  while (std::getline(wordlist, line)) {
    line = trim_line(std::move(line));
    if (line.size() < min_word_len || !is_alpha(line)) continue;
    vocab.entries_.insert(to_lower(line));
  }
  if (vocab.entries_.empty()) throw InputError("vocabulary is empty after filtering");
  return vocab;
}

Vocabulary Vocabulary::build_file(const std::string& path, std::size_t min_word_len) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vocabulary file: " + path);
  return build(in, min_word_len);
}

bool Vocabulary::contains(std::string_view word) const {
  return entries_.contains(std::string(word));
}

// ---------------------------------------------------------------------------
// Splitting

std::vector<std::string> split_on_boundaries(std::string_view name) {
  std::vector<std::string> pieces;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) pieces.push_back(std::move(cur));
    cur.clear();
  };

  CharClass prev = CharClass::delimiter;
  for (std::size_t i = 0; i < name.size(); ++i) {
    const CharClass k = classify_char(static_cast<unsigned char>(name[i]));
    if (k == CharClass::delimiter) {
      flush();
      prev = k;
      continue;
    }
    if (!cur.empty()) {
      const bool letter_digit = (is_letter(prev) && k == CharClass::digit) ||
                                (prev == CharClass::digit && is_letter(k));
      if (letter_digit || (prev == CharClass::lower && k == CharClass::upper)) {
        flush();
      } else if (prev == CharClass::upper && k == CharClass::lower && cur.size() >= 2 &&
                 classify_char(static_cast<unsigned char>(cur[cur.size() - 2])) ==
                     CharClass::upper) {
        // "HTTPServer": the last capital starts the next word.
        const char carried = cur.back();
        cur.pop_back();
        flush();
        cur.push_back(carried);
      }
    }
    cur.push_back(name[i]);
    prev = k;
  }
  flush();
  return pieces;
}

std::vector<std::string> segment_run(std::string_view run, const FrequencyLexicon& lexicon) {
  const std::size_t n = run.size();
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  std::vector<std::size_t> back(n + 1, 0);
  std::vector<bool> known(n + 1, false);
  best[0] = 0.0;
  const std::size_t max_len = lexicon.max_word_length();
  std::string piece;

  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > max_len ? i - max_len : 0;
    for (std::size_t j = lo; j < i; ++j) {
      if (best[j] == inf) continue;
      piece.assign(run.substr(j, i - j));
      if (auto r = lexicon.rank(piece)) {
        const double c = best[j] + lexicon.word_cost(*r);
        if (c < best[i]) {
          best[i] = c;
          back[i] = j;
          known[i] = true;
        }
      }
    }
    {
      const double c = best[i - 1] + lexicon.unknown_char_cost();
      if (c < best[i]) {
        best[i] = c;
        back[i] = i - 1;
        known[i] = false;
      }
    }
  }

  std::vector<std::pair<std::size_t, bool>> cuts;  // (start, known), reversed
  for (std::size_t i = n; i > 0; i = back[i]) cuts.emplace_back(back[i], known[i]);
  std::reverse(cuts.begin(), cuts.end());

  std::vector<std::string> out;
  bool last_unknown = false;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const std::size_t start = cuts[c].first;
    const std::size_t end = c + 1 < cuts.size() ? cuts[c + 1].first : n;
    std::string_view w = run.substr(start, end - start);
    if (!cuts[c].second && last_unknown) {
      out.back().append(w);
    } else {
      out.emplace_back(w);
    }
    last_unknown = !cuts[c].second;
  }
  return out;
}

std::vector<std::string> split_identifier_surface(std::string_view name,
                                                  const FrequencyLexicon& lexicon) {
  std::vector<std::string> out;
  for (auto& piece : split_on_boundaries(name)) {
    if (is_digits(piece)) {
      out.push_back(std::move(piece));
      continue;
    }
    std::size_t offset = 0;
    for (const auto& word : segment_run(to_lower(piece), lexicon)) {
      out.push_back(piece.substr(offset, word.size()));
      offset += word.size();
    }
  }
  return out;
}

TokenSeq split_identifier(std::string_view name, const FrequencyLexicon& lexicon) {
  TokenSeq tokens = split_identifier_surface(name, lexicon);
  for (auto& t : tokens) t = to_lower(t);
  return tokens;
}

bool is_function_word(std::string_view lower) noexcept {
  static constexpr std::array<std::string_view, 18> kWords{
      "a", "an", "and", "as", "at", "by", "for", "from", "in",
      "no", "of", "on", "or", "per", "the", "to", "vs", "with"};
  return std::find(kWords.begin(), kWords.end(), lower) != kWords.end();
}

bool is_logical_name(std::string_view name, const Vocabulary& vocab,
                     const FrequencyLexicon& lexicon) {
  if (name.empty()) return false;
  if (vocab.contains(to_lower(name))) return true;
  const TokenSeq tokens = split_identifier(name, lexicon);
  if (tokens.empty()) return false;
  for (const auto& t : tokens) {
    if (is_digits(t) || is_function_word(t)) continue;
    if (!vocab.contains(lemmatize(t)) && !vocab.contains(t)) return false;
  }
  return true;
}

}  // namespace nameguess
