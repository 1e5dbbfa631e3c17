#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace nameguess {

enum class DifficultyLevel : std::uint8_t { easy, medium, hard, extra_hard };

inline constexpr std::array<DifficultyLevel, 4> kAllLevels{
    DifficultyLevel::easy, DifficultyLevel::medium, DifficultyLevel::hard,
    DifficultyLevel::extra_hard};

std::string_view to_string(DifficultyLevel level) noexcept;
/// Display name used in rendered reports ("Extra Hard").
std::string_view display_name(DifficultyLevel level) noexcept;
DifficultyLevel difficulty_from_string(std::string_view s);

/// Cutpoints on the gold-length-normalized edit distance.
struct DifficultyThresholds {
  double t1 = 0.10;
  double t2 = 0.35;
  double t3 = 0.60;

  /// Throws InputError unless 0 <= t1 < t2 < t3 <= 1.
  void validate() const;
};

/// Tokenizes on delimiters and case/digit boundaries, drops digit-only tokens
/// and punctuation, lowercases, and joins with single spaces.
std::string normalize_for_distance(std::string_view name);

/// Levenshtein distance with unit costs over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// edit_distance(norm(query), norm(gold)) / len(norm(gold)). Throws
/// ClassificationError when the gold normalizes to the empty string.
double normalized_distance(std::string_view query, std::string_view gold);

DifficultyLevel level_for_distance(double d, const DifficultyThresholds& thresholds) noexcept;

DifficultyLevel classify(std::string_view query, std::string_view gold,
                         const DifficultyThresholds& thresholds = {});

/// Chooses cutpoints so that bucketing `distances` comes as close as the data
/// allows to `proportions` (easy, medium, hard, extra hard; must sum to 1).
/// Cutpoints sit halfway between adjacent distinct distances.
DifficultyThresholds calibrate_thresholds(std::span<const double> distances,
                                          const std::array<double, 4>& proportions);

}  // namespace nameguess
