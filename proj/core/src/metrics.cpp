#include "nameguess/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "nameguess/error.hpp"

namespace nameguess {

namespace {

bool is_ascii_punct(unsigned char c) noexcept {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<std::string> tokens_of(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < normalized.size()) {
    const auto sp = normalized.find(' ', i);
    const auto end = sp == std::string_view::npos ? normalized.size() : sp;
    if (end > i) out.emplace_back(normalized.substr(i, end - i));
    i = end + 1;
  }
  return out;
}

void accumulate(ScoreSummary& s, const EvalRecord& r) {
  s.em += r.em;
  s.f1 += r.f1;
  ++s.n;
}

void finish(ScoreSummary& s) {
  if (s.n) {
    s.em /= static_cast<double>(s.n);
    s.f1 /= static_cast<double>(s.n);
  }
}

nlohmann::ordered_json summary_json(const ScoreSummary& s) {
  return {{"em", s.em}, {"f1", s.f1}, {"n", s.n}};
}

ScoreSummary summary_from(const nlohmann::json& j) {
  return {j.at("em").get<double>(), j.at("f1").get<double>(), j.at("n").get<std::size_t>()};
}

nlohmann::ordered_json level_json(const LevelScores& l) {
  nlohmann::ordered_json j = summary_json(l.all);
  j["extracted"] = summary_json(l.extracted);
  j["extraction_rate"] = l.extraction_rate;
  return j;
}

LevelScores level_from(const nlohmann::json& j) {
  LevelScores l;
  l.all = summary_from(j);
  l.extracted = summary_from(j.at("extracted"));
  l.extracted_n = l.extracted.n;
  l.extraction_rate = j.at("extraction_rate").get<double>();
  return l;
}

std::string pct(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string normalize_answer(std::string_view s) {
  std::string spaced;
  spaced.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (is_ascii_punct(u) || is_space(c)) {
      spaced.push_back(' ');
    } else if (c >= 'A' && c <= 'Z') {
      spaced.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      spaced.push_back(c);
    }
  }
  std::string out;
  for (const auto& tok : tokens_of(spaced)) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

int exact_match(std::string_view pred, std::string_view gold) {
  return normalize_answer(pred) == normalize_answer(gold) ? 1 : 0;
}

double token_f1(std::string_view pred, std::string_view gold) {
  const auto p = tokens_of(normalize_answer(pred));
  const auto g = tokens_of(normalize_answer(gold));
  if (p.empty() || g.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t shared = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  if (shared == 0) return 0.0;
  const double precision = static_cast<double>(shared) / static_cast<double>(p.size());
  const double recall = static_cast<double>(shared) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

EvalRecord score_record(std::string table_id, std::size_t column_index,
                        std::optional<std::string> prediction, std::string gold,
                        DifficultyLevel difficulty,
                        std::span<const std::shared_ptr<const Metric>> plugins) {
  EvalRecord r;
  r.table_id = std::move(table_id);
  r.column_index = column_index;
  r.prediction = std::move(prediction);
  r.gold = std::move(gold);
  r.difficulty = difficulty;
  if (r.prediction) {
    r.em = exact_match(*r.prediction, r.gold);
    r.f1 = r.em ? 1.0 : token_f1(*r.prediction, r.gold);
    for (const auto& m : plugins) r.extra[m->name()] = m->score(*r.prediction, r.gold);
  } else {
    for (const auto& m : plugins) r.extra[m->name()] = 0.0;
  }
  return r;
}

EvalReport aggregate(std::span<const EvalRecord> records) {
  if (records.empty()) throw InputError("aggregate: no records to score");
  // Sum in canonical order so floating-point totals do not depend on input order.
  std::vector<const EvalRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const EvalRecord* a, const EvalRecord* b) {
    if (a->table_id != b->table_id) return a->table_id < b->table_id;
    if (a->column_index != b->column_index) return a->column_index < b->column_index;
    if (a->gold != b->gold) return a->gold < b->gold;
    return a->prediction < b->prediction;
  });

  EvalReport report;
  for (const auto* r : sorted) {
    auto& lvl = report.per_level[static_cast<std::size_t>(r->difficulty)];
    accumulate(report.overall.all, *r);
    accumulate(lvl.all, *r);
    if (r->prediction) {
      accumulate(report.overall.extracted, *r);
      accumulate(lvl.extracted, *r);
    }
  }
  auto close = [](LevelScores& l) {
    l.extracted_n = l.extracted.n;
    l.extraction_rate =
        l.all.n ? static_cast<double>(l.extracted.n) / static_cast<double>(l.all.n) : 0.0;
    finish(l.all);
    finish(l.extracted);
  };
  close(report.overall);
  for (auto& l : report.per_level) close(l);
  return report;
}

nlohmann::ordered_json to_json(const EvalRecord& r) {
  nlohmann::ordered_json j;
  j["table_id"] = r.table_id;
  j["column_index"] = r.column_index;
  j["prediction"] = r.prediction ? nlohmann::ordered_json(*r.prediction) : nullptr;
  j["gold"] = r.gold;
  j["difficulty"] = to_string(r.difficulty);
  j["em"] = r.em;
  j["f1"] = r.f1;
  j["extracted"] = r.prediction.has_value();
  for (const auto& [k, v] : r.extra) j[k] = v;
  return j;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["overall"] = level_json(report.overall);
  nlohmann::ordered_json levels;
  for (auto l : kAllLevels) levels[std::string(to_string(l))] = level_json(report.level(l));
  j["per_difficulty"] = std::move(levels);
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    r.overall = level_from(j.at("overall"));
    for (auto l : kAllLevels) {
      r.per_level[static_cast<std::size_t>(l)] =
          level_from(j.at("per_difficulty").at(std::string(to_string(l))));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string render_report(std::span<const std::pair<std::string, EvalReport>> columns,
                          ScoreConvention convention) {
  if (columns.empty()) throw InputError("render_report: nothing to render");
  constexpr std::size_t kLabel = 12;
  constexpr std::size_t kCell = 7;

  auto pick = [convention](const LevelScores& l) -> const ScoreSummary& {
    return convention == ScoreConvention::all_records ? l.all : l.extracted;
  };

  std::vector<std::size_t> widths;
  std::string head = std::string(kLabel, ' ');
  std::string sub = pad("", kLabel);
  sub.replace(0, 10, "Difficulty");
  for (const auto& [name, _] : columns) {
    const std::size_t w = std::max(2 * kCell + 1, name.size());
    widths.push_back(w);
    head += " | " + pad(name, w);
    sub += " | " + pad(pad("EM", kCell) + " " + pad("F1", kCell), w);
  }
  std::string rule(sub.size(), '-');

  std::string out = head + "\n" + sub + "\n" + rule + "\n";
  auto row = [&](std::string_view label, auto&& level_of) {
    std::string line(label);
    line.resize(kLabel, ' ');
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& s = pick(level_of(columns[c].second));
      line += " | " + pad(pad(pct(s.em), kCell) + " " + pad(pct(s.f1), kCell), widths[c]);
    }
    out += line + "\n";
  };
  row("Overall", [](const EvalReport& r) -> const LevelScores& { return r.overall; });
  for (auto l : kAllLevels) {
    row(display_name(l), [l](const EvalReport& r) -> const LevelScores& { return r.level(l); });
  }
  return out;
}

}  // namespace nameguess
