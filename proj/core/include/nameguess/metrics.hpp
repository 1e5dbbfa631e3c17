#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nameguess/difficulty.hpp"

namespace nameguess {

/// Lowercases, turns punctuation into spaces, drops the articles a/an/the,
/// and collapses whitespace.
std::string normalize_answer(std::string_view s);

int exact_match(std::string_view pred, std::string_view gold);

/// Multiset token-overlap F1 over normalized whitespace tokens.
double token_f1(std::string_view pred, std::string_view gold);

/// Extension point for additional per-example scores (for example an
/// embedding-based similarity). Implementations must be thread-safe.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual std::string name() const = 0;
  virtual double score(std::string_view pred, std::string_view gold) const = 0;
};

struct EvalRecord {
  std::string table_id;
  std::size_t column_index = 0;
  std::optional<std::string> prediction;  // nullopt: extraction failed
  std::string gold;
  DifficultyLevel difficulty = DifficultyLevel::easy;
  int em = 0;
  double f1 = 0.0;
  std::map<std::string, double> extra;  // plugin metric scores
};

/// Fills em/f1 (and plugin scores) from prediction and gold.
EvalRecord score_record(std::string table_id, std::size_t column_index,
                        std::optional<std::string> prediction, std::string gold,
                        DifficultyLevel difficulty,
                        std::span<const std::shared_ptr<const Metric>> plugins = {});

struct ScoreSummary {
  double em = 0.0;  // fractions in [0,1]
  double f1 = 0.0;
  std::size_t n = 0;
};

struct LevelScores {
  ScoreSummary all;        // failures count as zero
  ScoreSummary extracted;  // extracted predictions only
  std::size_t extracted_n = 0;
  double extraction_rate = 0.0;
};

struct EvalReport {
  LevelScores overall;
  std::array<LevelScores, 4> per_level{};  // indexed by DifficultyLevel

  const LevelScores& level(DifficultyLevel l) const {
    return per_level[static_cast<std::size_t>(l)];
  }
};

/// Throws InputError for an empty record set. The result does not depend on
/// record order.
EvalReport aggregate(std::span<const EvalRecord> records);

nlohmann::ordered_json to_json(const EvalRecord& record);
nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

enum class ScoreConvention { all_records, extracted_only };

/// Text table with one EM and one F1 column per named report and rows
/// Overall, Easy, Medium, Hard, Extra Hard. Scores are percentages.
std::string render_report(std::span<const std::pair<std::string, EvalReport>> columns,
                          ScoreConvention convention = ScoreConvention::all_records);

}  // namespace nameguess
