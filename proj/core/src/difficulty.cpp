#include "nameguess/difficulty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "nameguess/error.hpp"
#include "nameguess/segment.hpp"

namespace nameguess {

std::string_view to_string(DifficultyLevel level) noexcept {
  switch (level) {
    case DifficultyLevel::easy:
      return "easy";
    case DifficultyLevel::medium:
      return "medium";
    case DifficultyLevel::hard:
      return "hard";
    case DifficultyLevel::extra_hard:
      return "extra_hard";
  }
  return "easy";
}

std::string_view display_name(DifficultyLevel level) noexcept {
  switch (level) {
    case DifficultyLevel::easy:
      return "Easy";
    case DifficultyLevel::medium:
      return "Medium";
    case DifficultyLevel::hard:
      return "Hard";
    case DifficultyLevel::extra_hard:
      return "Extra Hard";
  }
  return "Easy";
}

DifficultyLevel difficulty_from_string(std::string_view s) {
  for (auto level : kAllLevels) {
    if (to_string(level) == s) return level;
  }
  throw InputError("unknown difficulty level: '" + std::string(s) + "'");
}

void DifficultyThresholds::validate() const {
  if (!(0.0 <= t1 && t1 < t2 && t2 < t3 && t3 <= 1.0)) {
    throw InputError("difficulty thresholds must satisfy 0 <= t1 < t2 < t3 <= 1");
  }
}

std::string normalize_for_distance(std::string_view name) {
  std::string out;
  for (const auto& piece : split_on_boundaries(name)) {
    if (is_digits(piece)) continue;
    if (!out.empty()) out.push_back(' ');
    out += to_lower(piece);
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

double normalized_distance(std::string_view query, std::string_view gold) {
  const std::string g = normalize_for_distance(gold);
  if (g.empty()) {
    throw ClassificationError("gold name '" + std::string(gold) +
                              "' is empty after normalization");
  }
  const std::string q = normalize_for_distance(query);
  return static_cast<double>(edit_distance(q, g)) / static_cast<double>(g.size());
}

DifficultyLevel level_for_distance(double d, const DifficultyThresholds& t) noexcept {
  if (d <= t.t1) return DifficultyLevel::easy;
  if (d <= t.t2) return DifficultyLevel::medium;
  if (d <= t.t3) return DifficultyLevel::hard;
  return DifficultyLevel::extra_hard;
}

DifficultyLevel classify(std::string_view query, std::string_view gold,
                         const DifficultyThresholds& thresholds) {
  return level_for_distance(normalized_distance(query, gold), thresholds);
}

DifficultyThresholds calibrate_thresholds(std::span<const double> distances,
                                          const std::array<double, 4>& proportions) {
  if (distances.empty()) throw InputError("calibration needs at least one distance");
  double total = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0)) throw InputError("calibration proportions must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw InputError("calibration proportions must sum to 1");

  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());

  // Distinct values and the fraction of samples <= each.
  std::vector<double> values;
  std::vector<double> cdf;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    values.push_back(sorted[i]);
    cdf.push_back(static_cast<double>(i + 1) / n);
  }

  // Candidate cuts in increasing order, each with the fraction of samples it
  // puts at or below itself and the range [lo, hi] of thresholds that do so.
  // A range with room can hold several cutpoints, which empties the levels
  // between them. Cutpoints may not exceed 1.
  struct Cut {
    double lo;
    double hi;
    double fraction;
    bool roomy() const { return hi > lo; }
  };
  std::vector<Cut> cuts;
  if (values.front() > 0.0) cuts.push_back({0.0, std::min(values.front(), 1.0), 0.0});
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1.0) break;
    const double hi = i + 1 < values.size() ? std::min(values[i + 1], 1.0) : 1.0;
    cuts.push_back({values[i], hi, cdf[i]});
  }
  if (cuts.size() < 3 && !std::any_of(cuts.begin(), cuts.end(), [](const Cut& c) { return c.roomy(); })) {
    throw InputError("too few distinct distances to place three cutpoints");
  }

  const std::size_t m = cuts.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = cuts[i].fraction;

  // Minimizes the largest per-level share error. For a tolerance eps, ok[c][i]
  // says cut c can sit at index i with every earlier level within eps;
  // bisection on eps then finds the smallest feasible tolerance.
  // A cut may repeat the previous one only when its range has room.
  auto bound = [&](std::size_t i) { return cuts[i].roomy() ? i + 1 : i; };
  auto within = [&](std::size_t i, double lo, double hi) {
    // Earlier-or-equal indices with f[j] in [lo, hi] form a contiguous range.
    const auto end = f.begin() + static_cast<long>(bound(i));
    const auto first = std::lower_bound(f.begin(), end, lo);
    const auto last = std::upper_bound(f.begin(), end, hi);
    return std::pair<std::size_t, std::size_t>(first - f.begin(), last - f.begin());
  };
  std::array<std::vector<char>, 3> ok;
  auto feasible = [&](double eps) {
    for (auto& v : ok) v.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) ok[0][i] = std::abs(f[i] - proportions[0]) <= eps;
    for (std::size_t c = 1; c < 3; ++c) {
      std::vector<std::size_t> prefix(m + 1, 0);
      for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + ok[c - 1][i];
      for (std::size_t i = 0; i < m; ++i) {
        const auto [lo, hi] = within(i, f[i] - proportions[c] - eps, f[i] - proportions[c] + eps);
        ok[c][i] = hi > lo && prefix[hi] > prefix[lo];
      }
    }
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      ok[2][i] = ok[2][i] && std::abs(1.0 - f[i] - proportions[3]) <= eps;
      any = any || ok[2][i];
    }
    return any;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 64 && hi - lo > 1e-12; ++it) {
    const double mid = (lo + hi) / 2.0;
    (feasible(mid) ? hi : lo) = mid;
  }
  feasible(hi);

  // Walk back from the last cut, taking the closest fit at each step.
  std::array<std::size_t, 3> chosen{};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double e = std::abs(1.0 - f[i] - proportions[3]);
    if (ok[2][i] && e < best) best = e, chosen[2] = i;
  }
  for (std::size_t c = 2; c > 0; --c) {
    best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bound(chosen[c]); ++i) {
      const double e = std::abs(f[chosen[c]] - f[i] - proportions[c]);
      if (ok[c - 1][i] && e <= hi && e < best) best = e, chosen[c - 1] = i;
    }
  }
  // Spread cutpoints that share a cut evenly over its range.
  std::array<double, 3> at{};
  for (std::size_t c = 0; c < 3;) {
    std::size_t e = c;
    while (e < 3 && chosen[e] == chosen[c]) ++e;
    const Cut& cut = cuts[chosen[c]];
    for (std::size_t r = c; r < e; ++r) {
      at[r] = cut.roomy() ? cut.lo + (cut.hi - cut.lo) * static_cast<double>(r - c + 1) /
                                         static_cast<double>(e - c + 1)
                          : cut.lo;
    }
    c = e;
  }
  DifficultyThresholds t{at[0], at[1], at[2]};
  t.validate();
  return t;
}

}  // namespace nameguess
