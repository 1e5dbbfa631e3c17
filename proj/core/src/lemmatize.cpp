#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "nameguess/segment.hpp"

namespace nameguess {

namespace {

// Irregular plurals and participles, plus regular-looking plurals whose
// suffix rules would mangle the stem. Every value is a fixed point of the
// suffix rules below.
const std::unordered_map<std::string_view, std::string_view>& irregular_forms() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"children", "child"},       {"men", "man"},
      {"women", "woman"},          {"people", "person"},
      {"feet", "foot"},            {"teeth", "tooth"},
      {"geese", "goose"},          {"mice", "mouse"},
      {"lice", "louse"},           {"oxen", "ox"},
      {"criteria", "criterion"},   {"phenomena", "phenomenon"},
      {"indices", "index"},        {"matrices", "matrix"},
      {"vertices", "vertex"},      {"appendices", "appendix"},
      {"analyses", "analysis"},    {"theses", "thesis"},
      {"crises", "crisis"},        {"diagnoses", "diagnosis"},
      {"hypotheses", "hypothesis"}, {"parentheses", "parenthesis"},
      {"leaves", "leaf"},          {"lives", "life"},
      {"wives", "wife"},           {"knives", "knife"},
      {"halves", "half"},          {"selves", "self"},
      {"shelves", "shelf"},        {"wolves", "wolf"},
      {"thieves", "thief"},        {"loaves", "loaf"},
      {"calves", "calf"},          {"media", "medium"},
      {"curricula", "curriculum"}, {"alumni", "alumnus"},
      {"cacti", "cactus"},         {"fungi", "fungus"},
      {"nuclei", "nucleus"},       {"radii", "radius"},
      {"stimuli", "stimulus"},     {"syllabi", "syllabus"},
      {"movies", "movie"},         {"cookies", "cookie"},
      {"calories", "calorie"},     {"zombies", "zombie"},
      {"rookies", "rookie"},       {"prairies", "prairie"},
      {"brownies", "brownie"},     {"niches", "niche"},
      {"caches", "cache"},         {"aches", "ache"},
      {"headaches", "headache"},   {"avalanches", "avalanche"},
      {"buses", "bus"},            {"gases", "gas"},
      {"statuses", "status"},      {"viruses", "virus"},
      {"bonuses", "bonus"},        {"campuses", "campus"},
      {"censuses", "census"},      {"focuses", "focus"},
      {"surpluses", "surplus"},    {"corpuses", "corpus"},
      {"aliases", "alias"},        {"biases", "bias"},
      {"atlases", "atlas"},        {"canvases", "canvas"},
      {"paid", "pay"},             {"sold", "sell"},
      {"bought", "buy"},           {"built", "build"},
      {"made", "make"},            {"held", "hold"},
      {"taken", "take"},           {"given", "give"},
      {"written", "write"},        {"spent", "spend"},
      {"sent", "send"},            {"chosen", "choose"},
      {"driven", "drive"},         {"seen", "see"},
      {"known", "know"},           {"grown", "grow"},
      {"shown", "show"},           {"drawn", "draw"},
      {"fallen", "fall"},          {"begun", "begin"},
      {"broken", "break"},         {"frozen", "freeze"},
      {"spoken", "speak"},         {"stolen", "steal"},
      {"hidden", "hide"},          {"ridden", "ride"},
      {"risen", "rise"},           {"eaten", "eat"},
      {"forgotten", "forget"},     {"gotten", "get"},
  };
  return table;
}

// Words that end in "s" but are not plurals.
const std::unordered_set<std::string_view>& s_exceptions() {
  static const std::unordered_set<std::string_view> words = {
      "news",   "series",  "species", "always", "perhaps", "lens",    "atlas",
      "canvas", "alias",   "bias",    "chaos",  "ethos",   "pathos",  "cosmos",
      "kudos",  "whereas", "gas",     "yes",    "has",     "was",     "does",
      "its",    "his",     "hers",    "ours",   "yours",   "theirs",  "towards",
      "afterwards", "besides", "sometimes", "thanks", "mumps", "measles", "diabetes",
      "herpes", "rabies",  "shingles", "billiards", "christmas", "texas", "kansas",
      "arkansas", "illinois", "mathematics", "physics", "economics", "politics",
      "ethics", "statistics", "logistics", "electronics", "athletics", "genetics",
      "linguistics", "analytics", "graphics", "acoustics", "aerobics", "robotics",
  };
  return words;
}

bool ends_with(std::string_view s, std::string_view suffix) noexcept {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string apply_rules(std::string_view w) {
  if (s_exceptions().contains(w)) return std::string(w);
  if (w.size() > 4 && ends_with(w, "ies")) {
    return std::string(w.substr(0, w.size() - 3)) + "y";
  }
  for (std::string_view suffix : {"sses", "shes", "ches", "xes", "zzes"}) {
    if (w.size() > suffix.size() && ends_with(w, suffix)) {
      return std::string(w.substr(0, w.size() - 2));
    }
  }
  if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return std::string(w.substr(0, w.size() - 1));
  }
  return std::string(w);
}

}  // namespace

std::string lemmatize(std::string_view token) {
  const auto& irregular = irregular_forms();
  if (auto it = irregular.find(token); it != irregular.end()) return std::string(it->second);
  std::string base = apply_rules(token);
  // A stripped suffix can expose an irregular form ("childrens").
  if (auto it = irregular.find(base); it != irregular.end()) return std::string(it->second);
  return base;
}

namespace detail {

std::vector<std::pair<std::string, std::string>> irregular_lemma_table() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : irregular_forms()) out.emplace_back(k, v);
  return out;
}

}  // namespace detail

}  // namespace nameguess
