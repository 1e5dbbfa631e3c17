#include "nameguess/corpus.hpp"

#include <array>
#include <istream>
#include <iterator>
#include <ostream>
#include <unordered_set>

#include "nameguess/error.hpp"

namespace nameguess {

bool is_nan_token(std::string_view s) noexcept {
  static constexpr std::array<std::string_view, 6> kTokens = {
      "", "NaN", "nan", "NA", "null", "NULL"};
  for (auto t : kTokens) {
    if (s == t) return true;
  }
  return false;
}

namespace {

// Splits the whole buffer into records of raw fields. Quoted fields may span
// lines; "" inside quotes is an escaped quote.
std::vector<std::vector<std::string>> parse_records(std::string_view text, char delim) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A line with nothing on it is skipped rather than read as one empty cell.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delim) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // handled by the '\n' branch
    } else if (c == '\n' || c == '\r') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) {
    throw ParseError("unterminated quoted field in record " + std::to_string(records.size()),
                     records.size());
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

}  // namespace

Table ingest_csv(std::istream& source, std::string id, char delimiter) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  auto records = parse_records(text, delimiter);
  if (records.empty()) throw EmptyTableError("empty input for table '" + id + "'");

  Table table;
  table.id = std::move(id);
  table.headers = std::move(records[0]);
  const std::size_t width = table.headers.size();
  table.cells.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& raw = records[r];
    if (raw.size() != width) {
      throw ParseError("row " + std::to_string(r) + " of table '" + table.id + "' has " +
                           std::to_string(raw.size()) + " fields, expected " +
                           std::to_string(width),
                       r);
    }
    std::vector<Cell> row;
    row.reserve(width);
    for (auto& f : raw) {
      if (is_nan_token(f)) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(f));
      }
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

namespace {

void write_field(std::ostream& out, std::string_view s, char delim) {
  const bool quote = s.find_first_of(std::string{delim} + "\"\r\n") != std::string_view::npos;
  if (!quote) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(std::ostream& out, const Table& table, char delimiter) {
  for (std::size_t c = 0; c < table.headers.size(); ++c) {
    if (c) out << delimiter;
    write_field(out, table.headers[c], delimiter);
  }
  out << '\n';
  for (const auto& row : table.cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << delimiter;
      if (row[c]) write_field(out, *row[c], delimiter);
    }
    out << '\n';
  }
}

void FilterCriteria::validate() const {
  auto ratio_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!ratio_ok(max_nan_fraction)) throw InputError("max_nan_fraction must be in [0, 1]");
  if (!ratio_ok(max_duplicate_name_fraction)) {
    throw InputError("max_duplicate_name_fraction must be in [0, 1]");
  }
  if (min_rows == 0 || min_cols == 0 || max_rows_retained == 0) {
    throw InputError("filter counts must be at least 1");
  }
  if (max_rows_retained < min_rows) {
    throw InputError("max_rows_retained must be >= min_rows");
  }
}

double nan_fraction(const Table& table) noexcept {
  std::size_t total = 0, absent = 0;
  for (const auto& row : table.cells) {
    total += row.size();
    for (const auto& cell : row) absent += !cell.has_value();
  }
  return total == 0 ? 0.0 : static_cast<double>(absent) / static_cast<double>(total);
}

double duplicate_name_fraction(const Table& table) noexcept {
  if (table.headers.empty()) return 0.0;
  std::unordered_set<std::string_view> distinct(table.headers.begin(), table.headers.end());
  return 1.0 - static_cast<double>(distinct.size()) / static_cast<double>(table.headers.size());
}

FilterResult filter_tables(std::vector<Table> tables, const FilterCriteria& criteria) {
  criteria.validate();
  FilterResult result;
  for (auto& table : tables) {
    if (table.cells.size() > criteria.max_rows_retained) {
      table.cells.resize(criteria.max_rows_retained);
    }
    std::optional<std::string_view> reason;
    if (table.n_rows() < criteria.min_rows) {
      reason = kTooFewRows;
    } else if (table.n_cols() < criteria.min_cols) {
      reason = kTooFewColumns;
    } else if (nan_fraction(table) > criteria.max_nan_fraction) {
      reason = kNanFraction;
    } else if (duplicate_name_fraction(table) > criteria.max_duplicate_name_fraction) {
      reason = kDuplicateNames;
    }
    if (reason) {
      result.rejected.push_back(
          {std::move(table.id), std::string(*reason), table.n_rows(), table.n_cols()});
    } else {
      result.kept.push_back(std::move(table));
    }
  }
  return result;
}

namespace {

nlohmann::ordered_json manifest_line(const std::string& id, std::size_t rows, std::size_t cols,
                                     const std::string* reason) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["n_rows"] = rows;
  j["n_cols"] = cols;
  j["kept"] = reason == nullptr;
  j["reason"] = reason ? nlohmann::ordered_json(*reason) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace

nlohmann::ordered_json manifest_entry(const Table& kept) {
  return manifest_line(kept.id, kept.n_rows(), kept.n_cols(), nullptr);
}

nlohmann::ordered_json manifest_entry(const Rejection& rejected) {
  return manifest_line(rejected.id, rejected.n_rows, rejected.n_cols, &rejected.reason);
}

}  // namespace nameguess
