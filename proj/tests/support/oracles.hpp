#pragma once

// Reference implementations written independently of the library code, used
// to cross-check it.

#include <cctype>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nameguess/segment.hpp"

namespace ngtest::oracle {

/// Levenshtein by memoized recursion on suffixes.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                                std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, go(i + 1, j) + 1);
    best = std::min(best, go(i, j + 1) + 1);
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

inline std::vector<std::string> answer_tokens(const std::string& s) {
  std::string cleaned;
  for (unsigned char c : s) {
    if (c < 128 && std::ispunct(c)) cleaned += ' ';
    else if (c < 128) cleaned += static_cast<char>(std::tolower(c));
    else cleaned += static_cast<char>(c);
  }
  std::istringstream in(cleaned);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) {
    if (w == "a" || w == "an" || w == "the") continue;
    out.push_back(w);
  }
  return out;
}

inline int exact_match(const std::string& pred, const std::string& gold) {
  return answer_tokens(pred) == answer_tokens(gold) ? 1 : 0;
}

/// Token F1 with a quadratic greedy multiset match.
inline double token_f1(const std::string& pred, const std::string& gold) {
  const auto p = answer_tokens(pred);
  const auto g = answer_tokens(gold);
  if (p.empty() || g.empty()) return 0.0;
  std::vector<bool> used(g.size(), false);
  double shared = 0;
  for (const auto& t : p) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!used[j] && g[j] == t) {
        used[j] = true;
        shared += 1;
        break;
      }
    }
  }
  if (shared == 0) return 0.0;
  const double prec = shared / static_cast<double>(p.size());
  const double rec = shared / static_cast<double>(g.size());
  return 2 * prec * rec / (prec + rec);
}

/// Minimum segmentation cost of `run` found by enumerating every way of
/// cutting it into pieces, where a piece is either a lexicon word or a
/// single character charged the unknown penalty. Exponential; keep runs short.
inline double min_segmentation_cost(const std::string& run,
                                    const nameguess::FrequencyLexicon& lex) {
  const std::size_t n = run.size();
  double best = std::numeric_limits<double>::infinity();
  // Bit i set: a cut after position i.
  const std::size_t masks = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    double cost = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool cut = i + 1 == n || (mask >> i & 1);
      if (!cut) continue;
      const std::string piece = run.substr(start, i + 1 - start);
      if (auto r = lex.rank(piece)) {
        cost += lex.word_cost(*r);
      } else if (piece.size() == 1) {
        cost += lex.unknown_char_cost();
      } else {
        cost = std::numeric_limits<double>::infinity();
        break;
      }
      start = i + 1;
    }
    best = std::min(best, cost);
  }
  return best;
}

inline double segmentation_cost(const std::vector<std::string>& pieces,
                                const nameguess::FrequencyLexicon& lex) {
  double cost = 0;
  for (const auto& p : pieces) {
    if (auto r = lex.rank(p)) cost += lex.word_cost(*r);
    else cost += lex.unknown_char_cost() * static_cast<double>(p.size());
  }
  return cost;
}

/// Whether `sub` can be obtained from `s` by deleting characters.
inline bool is_subsequence(const std::string& sub, const std::string& s) {
  std::size_t j = 0;
  for (char c : s) {
    if (j < sub.size() && sub[j] == c) ++j;
  }
  return j == sub.size();
}

inline std::string collapse_repeats(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (out.empty() || out.back() != c) out += c;
  }
  return out;
}

}  // namespace ngtest::oracle
