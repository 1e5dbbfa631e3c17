#include "nameguess/abbrev.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_set>

#include "nameguess/error.hpp"
#include "nameguess/segment.hpp"

namespace nameguess {

namespace {

template <typename Enum, std::size_t N>
Enum enum_from_string(std::string_view s, const std::array<std::string_view, N>& names,
                      std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  throw InputError("unknown " + std::string(what) + ": '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 3> kMethodNames{"keep", "lookup", "rule"};
constexpr std::array<std::string_view, 3> kRuleNames{"rule1", "rule2", "rule3"};
constexpr std::array<std::string_view, 4> kCaseNames{"camel", "pascal", "snake", "simple"};
constexpr std::array<std::string_view, 3> kSnakeNames{"upper", "lower", "as_produced"};
constexpr std::array<std::string_view, 7> kViaNames{"keep",  "lookup",   "rule",   "cache",
                                                    "year",  "verbatim", "acronym"};

bool is_vowel(char c) noexcept {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::string capitalize(std::string_view s) {
  std::string out = to_lower(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string normalize_phrase(std::string_view s) {
  std::string out;
  for (const auto& w : split(trim(s), ' ')) {
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += to_lower(w);
  }
  return out;
}

std::size_t word_count(std::string_view phrase) {
  return static_cast<std::size_t>(std::count(phrase.begin(), phrase.end(), ' ')) + 1;
}

// Longest phrase of up to max_words tokens starting at pos that `has` accepts.
template <typename Has>
std::optional<PhraseMatch> longest_match(std::span<const std::string> words, std::size_t pos,
                                         std::size_t max_words, std::size_t min_words, Has has) {
  if (pos >= words.size()) return std::nullopt;
  const std::size_t limit = std::min(max_words, words.size() - pos);
  for (std::size_t n = limit; n >= min_words && n > 0; --n) {
    std::string key = words[pos];
    for (std::size_t i = 1; i < n; ++i) {
      key.push_back(' ');
      key += words[pos + i];
    }
    if (has(key)) return PhraseMatch{n, std::move(key)};
  }
  return std::nullopt;
}

void check_weights(std::span<const double> w, std::string_view name) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || x > 1.0) {
      throw InputError(std::string(name) + " entries must lie in [0, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError(std::string(name) + " must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

void check_probability(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

std::string_view to_string(Method m) noexcept { return kMethodNames[static_cast<std::size_t>(m)]; }
std::string_view to_string(Rule r) noexcept { return kRuleNames[static_cast<std::size_t>(r)]; }
std::string_view to_string(CaseStyle s) noexcept { return kCaseNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(SnakeCase s) noexcept {
  return kSnakeNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(Via v) noexcept { return kViaNames[static_cast<std::size_t>(v)]; }

Method method_from_string(std::string_view s) {
  return enum_from_string<Method>(s, kMethodNames, "method");
}
Rule rule_from_string(std::string_view s) { return enum_from_string<Rule>(s, kRuleNames, "rule"); }
CaseStyle case_style_from_string(std::string_view s) {
  return enum_from_string<CaseStyle>(s, kCaseNames, "case style");
}
SnakeCase snake_case_from_string(std::string_view s) {
  return enum_from_string<SnakeCase>(s, kSnakeNames, "snake casing");
}
Via via_from_string(std::string_view s) { return enum_from_string<Via>(s, kViaNames, "via"); }

// ---------------------------------------------------------------------------
// Configuration

void FabricationConfig::validate() const {
  check_weights(p_method, "p_method");
  check_weights(p_rule, "p_rule");
  check_weights(p_case, "p_case");
  check_weights(p_snake_case, "p_snake_case");
  if (k_min < 1 || k_max > 5 || k_min > k_max) {
    throw InputError("k range must satisfy 1 <= k_min <= k_max <= 5");
  }
  check_probability(p_acronym, "p_acronym");
  check_probability(p_year_shorten, "p_year_shorten");
  check_probability(p_word_removal, "p_word_removal");
  check_probability(p_reorder_year_front, "p_reorder_year_front");
}

nlohmann::ordered_json to_json(const FabricationConfig& c) {
  nlohmann::ordered_json j;
  j["p_method"] = c.p_method;
  j["p_rule"] = c.p_rule;
  j["p_case"] = c.p_case;
  j["p_snake_case"] = c.p_snake_case;
  j["k_range"] = {c.k_min, c.k_max};
  j["p_acronym"] = c.p_acronym;
  j["p_year_shorten"] = c.p_year_shorten;
  j["p_word_removal"] = c.p_word_removal;
  j["p_reorder_year_front"] = c.p_reorder_year_front;
  j["removable_words"] = c.removable_words;
  j["seed"] = c.seed;
  j["lookup_path"] = c.lookup_path;
  j["acronym_path"] = c.acronym_path;
  return j;
}

FabricationConfig config_from_json(const nlohmann::json& j, FabricationConfig c) {
  if (!j.is_object()) throw InputError("fabrication config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "p_method") {
        c.p_method = v.get<std::array<double, 3>>();
      } else if (key == "p_rule") {
        c.p_rule = v.get<std::array<double, 3>>();
      } else if (key == "p_case") {
        c.p_case = v.get<std::array<double, 4>>();
      } else if (key == "p_snake_case") {
        c.p_snake_case = v.get<std::array<double, 3>>();
      } else if (key == "k_range") {
        auto k = v.get<std::array<int, 2>>();
        c.k_min = k[0];
        c.k_max = k[1];
      } else if (key == "p_acronym") {
        c.p_acronym = v.get<double>();
      } else if (key == "p_year_shorten") {
        c.p_year_shorten = v.get<double>();
      } else if (key == "p_word_removal") {
        c.p_word_removal = v.get<double>();
      } else if (key == "p_reorder_year_front") {
        c.p_reorder_year_front = v.get<double>();
      } else if (key == "removable_words") {
        c.removable_words = v.get<std::vector<std::string>>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "lookup_path") {
        c.lookup_path = v.get<std::string>();
      } else if (key == "acronym_path") {
        c.acronym_path = v.get<std::string>();
      } else {
        throw InputError("unknown fabrication config key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad fabrication config value: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Dictionaries

LookupDict LookupDict::load(std::istream& source) {
  LookupDict dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("lookup dictionary line " + std::to_string(line_no) + " has no tab",
                       line_no);
    }
    std::vector<std::string> candidates;
    for (auto& c : split(std::string_view(line).substr(tab + 1), '|')) {
      c = trim(c);
      if (!c.empty()) candidates.push_back(std::move(c));
    }
    auto key = normalize_phrase(std::string_view(line).substr(0, tab));
    if (key.empty() || candidates.empty()) {
      throw ParseError("lookup dictionary line " + std::to_string(line_no) + " is incomplete",
                       line_no);
    }
    dict.add(std::move(key), std::move(candidates));
  }
  return dict;
}

LookupDict LookupDict::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lookup dictionary: " + path);
  return load(in);
}

void LookupDict::add(std::string key, std::vector<std::string> candidates) {
  key = normalize_phrase(key);
  max_words_ = std::max(max_words_, word_count(key));
  auto& slot = map_[std::move(key)];
  for (auto& c : candidates) {
    if (std::find(slot.begin(), slot.end(), c) == slot.end()) slot.push_back(std::move(c));
  }
}

const std::vector<std::string>* LookupDict::find(std::string_view key) const {
  auto it = map_.find(to_lower(key));
  return it == map_.end() ? nullptr : &it->second;
}

std::optional<PhraseMatch> LookupDict::match(std::span<const std::string> lower_words,
                                             std::size_t pos) const {
  return longest_match(lower_words, pos, max_words_, 1,
                       [&](const std::string& k) { return map_.contains(k); });
}

AcronymDict AcronymDict::load(std::istream& source) {
  AcronymDict dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("acronym dictionary line " + std::to_string(line_no) + " has no tab",
                       line_no);
    }
    auto phrase = normalize_phrase(std::string_view(line).substr(0, tab));
    auto acronym = trim(std::string_view(line).substr(tab + 1));
    if (word_count(phrase) < 2 || !is_alpha(acronym)) {
      throw ParseError("acronym dictionary line " + std::to_string(line_no) +
                           " needs a multi-word phrase and an alphabetic acronym",
                       line_no);
    }
    dict.add(std::move(phrase), std::move(acronym));
  }
  return dict;
}

AcronymDict AcronymDict::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open acronym dictionary: " + path);
  return load(in);
}

void AcronymDict::add(std::string phrase, std::string acronym) {
  phrase = normalize_phrase(phrase);
  max_words_ = std::max(max_words_, word_count(phrase));
  map_.insert_or_assign(std::move(phrase), to_lower(acronym));
}

const std::string* AcronymDict::find(std::string_view phrase) const {
  auto it = map_.find(normalize_phrase(phrase));
  return it == map_.end() ? nullptr : &it->second;
}

std::optional<PhraseMatch> AcronymDict::match(std::span<const std::string> lower_words,
                                              std::size_t pos) const {
  return longest_match(lower_words, pos, max_words_, 2,
                       [&](const std::string& k) { return map_.contains(k); });
}

// ---------------------------------------------------------------------------
// Draws and word-level rules

Method select_method(Rng& rng, std::span<const double, 3> weights) {
  return static_cast<Method>(rng.categorical(weights));
}

Rule select_rule(Rng& rng, std::span<const double, 3> weights) {
  return static_cast<Rule>(rng.categorical(weights));
}

std::string rule1_prefix(std::string_view word, int k) {
  const auto n = static_cast<std::size_t>(std::max(k, 0));
  return std::string(word.substr(0, std::min(n, word.size())));
}

std::string rule2_vowel_drop(std::string_view word, int k) {
  std::string w(word);
  const auto limit = static_cast<std::size_t>(std::max(k, 0));
  while (w.size() > limit) {
    std::size_t victim = 0;
    for (std::size_t i = w.size(); i-- > 1;) {
      if (is_vowel(w[i])) {
        victim = i;
        break;
      }
    }
    if (victim == 0) break;
    w.erase(victim, 1);
  }
  return w;
}

std::string rule3_random_drop(std::string_view word, int k, Rng& rng) {
  std::string w(word);
  const auto limit = static_cast<std::size_t>(std::max(k, 1));
  if (w.size() <= limit) return w;

  w.erase(std::unique(w.begin(), w.end()), w.end());

  std::vector<std::size_t> candidates;
  for (bool vowels : {true, false}) {
    while (w.size() > limit) {
      candidates.clear();
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (is_vowel(w[i]) == vowels) candidates.push_back(i);
      }
      if (candidates.empty()) break;
      w.erase(candidates[rng.below(candidates.size())], 1);
    }
  }
  return w;
}

std::string apply_rule(Rule rule, std::string_view word, int k, Rng& rng) {
  switch (rule) {
    case Rule::prefix:
      return rule1_prefix(word, k);
    case Rule::vowel_drop:
      return rule2_vowel_drop(word, k);
    case Rule::random_drop:
      return rule3_random_drop(word, k, rng);
  }
  return std::string(word);
}

std::optional<std::string> lookup_abbreviation(std::string_view word, const LookupDict& dict,
                                               Rng& rng) {
  const auto* candidates = dict.find(word);
  if (!candidates || candidates->empty()) return std::nullopt;
  return (*candidates)[rng.below(candidates->size())];
}

bool is_year(std::string_view token) noexcept {
  return token.size() == 4 && is_digits(token) && (token[0] == '1' || token[0] == '2');
}

std::string shorten_year(std::string_view token, Rng& rng, double p) {
  if (!is_year(token)) return std::string(token);
  return rng.bernoulli(p) ? std::string(token.substr(2)) : std::string(token);
}

AcronymResult acronym_extract(std::span<const std::string> words, const AcronymDict& dict,
                              Rng& rng, double p) {
  AcronymResult result;
  result.fired = rng.bernoulli(p);
  if (!result.fired) {
    result.words.assign(words.begin(), words.end());
    result.frozen.assign(words.size(), false);
    return result;
  }
  std::vector<std::string> lower;
  lower.reserve(words.size());
  for (const auto& w : words) lower.push_back(to_lower(w));

  for (std::size_t i = 0; i < words.size();) {
    if (auto m = dict.match(lower, i)) {
      const std::string acronym = to_upper(*dict.find(m->key));
      result.hits.push_back({m->key, acronym, result.words.size()});
      result.words.push_back(acronym);
      result.frozen.push_back(true);
      i += m->words;
    } else {
      result.words.push_back(words[i]);
      result.frozen.push_back(false);
      ++i;
    }
  }
  return result;
}

std::string combine(std::span<const std::string> words, CaseStyle style, SnakeCase snake_case) {
  if (words.empty()) throw InputError("combine: no words to join");
  std::string out;
  switch (style) {
    case CaseStyle::camel:
      out = to_lower(words[0]);
      for (std::size_t i = 1; i < words.size(); ++i) out += capitalize(words[i]);
      break;
    case CaseStyle::pascal:
      for (const auto& w : words) out += capitalize(w);
      break;
    case CaseStyle::snake:
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back('_');
        switch (snake_case) {
          case SnakeCase::upper:
            out += to_upper(words[i]);
            break;
          case SnakeCase::lower:
            out += to_lower(words[i]);
            break;
          case SnakeCase::as_produced:
            out += words[i];
            break;
        }
      }
      break;
    case CaseStyle::simple:
      for (const auto& w : words) out += to_lower(w);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traces

std::string replay(const AbbreviationTrace& trace) {
  std::vector<std::string> outputs;
  outputs.reserve(trace.words.size());
  for (const auto& w : trace.words) outputs.push_back(w.output);
  return combine(outputs, trace.style, trace.snake_case);
}

nlohmann::ordered_json to_json(const AbbreviationTrace& t) {
  nlohmann::ordered_json j;
  j["method"] = to_string(t.method);
  j["rule"] = to_string(t.rule);
  j["k"] = t.k;
  j["case"] = to_string(t.style);
  j["snake_case"] = to_string(t.snake_case);
  j["acronym_fired"] = t.acronym_fired;
  auto hits = nlohmann::ordered_json::array();
  for (const auto& h : t.acronym_hits) {
    hits.push_back({{"phrase", h.phrase}, {"acronym", h.acronym}, {"position", h.position}});
  }
  j["acronym_hits"] = std::move(hits);
  j["removed"] = t.removed;
  j["reordered"] = t.reordered;
  auto words = nlohmann::ordered_json::array();
  for (const auto& w : t.words) {
    words.push_back({{"source", w.source}, {"output", w.output}, {"via", to_string(w.via)}});
  }
  j["words"] = std::move(words);
  return j;
}

AbbreviationTrace trace_from_json(const nlohmann::json& j) {
  AbbreviationTrace t;
  try {
    t.method = method_from_string(j.at("method").get<std::string>());
    t.rule = rule_from_string(j.at("rule").get<std::string>());
    t.k = j.at("k").get<int>();
    t.style = case_style_from_string(j.at("case").get<std::string>());
    t.snake_case = snake_case_from_string(j.at("snake_case").get<std::string>());
    t.acronym_fired = j.at("acronym_fired").get<bool>();
    for (const auto& h : j.at("acronym_hits")) {
      t.acronym_hits.push_back({h.at("phrase").get<std::string>(),
                                h.at("acronym").get<std::string>(),
                                h.at("position").get<std::size_t>()});
    }
    t.removed = j.at("removed").get<std::vector<std::string>>();
    t.reordered = j.at("reordered").get<bool>();
    for (const auto& w : j.at("words")) {
      t.words.push_back({w.at("source").get<std::string>(), w.at("output").get<std::string>(),
                         via_from_string(w.at("via").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed abbreviation trace: ") + e.what());
  }
  return t;
}

const TableCache::Entry* TableCache::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void TableCache::remember(const std::string& key, Entry entry) {
  entries_.emplace(key, std::move(entry));
}

// ---------------------------------------------------------------------------
// Whole-header abbreviation

AbbreviationResult abbreviate_header(std::span<const std::string> words,
                                     const FabricationConfig& config, const Dictionaries& dicts,
                                     TableCache& cache, Rng& rng) {
  if (words.empty()) throw InputError("abbreviate_header: empty token list");

  AbbreviationTrace trace;
  trace.method = select_method(rng, config.p_method);
  trace.rule = select_rule(rng, config.p_rule);
  trace.k = static_cast<int>(rng.between(config.k_min, config.k_max));
  trace.style = static_cast<CaseStyle>(rng.categorical(config.p_case));
  trace.snake_case = static_cast<SnakeCase>(rng.categorical(config.p_snake_case));

  AcronymResult acr = acronym_extract(words, dicts.acronyms, rng, config.p_acronym);
  trace.acronym_fired = acr.fired;

  // Word removal: only listed words outside acronym spans, never the last word.
  std::vector<std::string> kept_words;
  std::vector<bool> kept_frozen;
  {
    std::vector<bool> drop(acr.words.size(), false);
    std::size_t remaining = acr.words.size();
    for (std::size_t i = 0; i < acr.words.size(); ++i) {
      if (acr.frozen[i]) continue;
      const auto lw = to_lower(acr.words[i]);
      if (std::find(config.removable_words.begin(), config.removable_words.end(), lw) ==
          config.removable_words.end()) {
        continue;
      }
      if (rng.bernoulli(config.p_word_removal) && remaining > 1) {
        drop[i] = true;
        --remaining;
        trace.removed.push_back(acr.words[i]);
      }
    }
    for (std::size_t i = 0; i < acr.words.size(); ++i) {
      if (drop[i]) continue;
      kept_words.push_back(acr.words[i]);
      kept_frozen.push_back(acr.frozen[i]);
    }
  }
  trace.acronym_hits = std::move(acr.hits);

  std::vector<std::string> lower;
  lower.reserve(kept_words.size());
  for (const auto& w : kept_words) lower.push_back(to_lower(w));

  for (std::size_t i = 0; i < kept_words.size();) {
    const std::string& surface = kept_words[i];
    if (kept_frozen[i]) {
      trace.words.push_back({surface, surface, Via::acronym});
      ++i;
      continue;
    }
    if (!is_alpha(surface)) {
      // Rules never touch non-alphabetical words; only years may shrink.
      if (const auto* hit = cache.find(surface)) {
        trace.words.push_back({surface, hit->form, Via::cache});
      } else if (is_year(surface)) {
        auto out = shorten_year(surface, rng, config.p_year_shorten);
        cache.remember(surface, {false, out});
        trace.words.push_back({surface, std::move(out), Via::year});
      } else {
        trace.words.push_back({surface, surface, Via::verbatim});
      }
      ++i;
      continue;
    }

    // Phrase keys in the lookup table may span several alphabetic tokens.
    std::size_t span = 1;
    std::string key = lower[i];
    if (trace.method == Method::lookup) {
      std::size_t run_end = i;
      while (run_end < kept_words.size() && !kept_frozen[run_end] && is_alpha(kept_words[run_end])) {
        ++run_end;
      }
      auto m = dicts.lookup.match(std::span(lower).subspan(0, run_end), i);
      if (m) {
        span = m->words;
        key = m->key;
      }
    }
    std::string source = surface;
    for (std::size_t s = 1; s < span; ++s) source += " " + kept_words[i + s];

    if (const auto* hit = cache.find(key)) {
      trace.words.push_back({source, hit->kept ? surface : hit->form, Via::cache});
    } else {
      switch (trace.method) {
        case Method::keep:
          cache.remember(key, {true, surface});
          trace.words.push_back({source, surface, Via::keep});
          break;
        case Method::lookup:
          if (auto abbr = lookup_abbreviation(key, dicts.lookup, rng)) {
            cache.remember(key, {false, *abbr});
            trace.words.push_back({source, std::move(*abbr), Via::lookup});
            break;
          }
          [[fallthrough]];
        case Method::rule: {
          auto out = apply_rule(trace.rule, key, trace.k, rng);
          cache.remember(key, {false, out});
          trace.words.push_back({source, std::move(out), Via::rule});
          break;
        }
      }
    }
    i += span;
  }

  // Optional year-to-front reorder.
  for (std::size_t i = 1; i < trace.words.size(); ++i) {
    if (trace.words[i].via == Via::acronym || !is_year(trace.words[i].source)) continue;
    if (rng.bernoulli(config.p_reorder_year_front)) {
      auto year = std::move(trace.words[i]);
      trace.words.erase(trace.words.begin() + static_cast<std::ptrdiff_t>(i));
      trace.words.insert(trace.words.begin(), std::move(year));
      trace.reordered = true;
    }
    break;
  }

  std::size_t hit = 0;
  for (std::size_t i = 0; i < trace.words.size() && hit < trace.acronym_hits.size(); ++i) {
    if (trace.words[i].via == Via::acronym) trace.acronym_hits[hit++].position = i;
  }

  AbbreviationResult result;
  result.query_name = replay(trace);
  result.trace = std::move(trace);
  return result;
}

}  // namespace nameguess
