#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nameguess {

using Cell = std::optional<std::string>;  // nullopt = NaN / absent

/// A parsed table. Rows are stored row-major; every row has headers.size()
/// cells.
struct Table {
  std::string id;
  std::optional<std::string> name;
  std::optional<std::string> category;
  std::optional<std::string> description;
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> cells;

  std::size_t n_rows() const noexcept { return cells.size(); }
  std::size_t n_cols() const noexcept { return headers.size(); }
};

/// True for the tokens treated as a missing value: "", NaN, nan, NA, null,
/// NULL.
bool is_nan_token(std::string_view s) noexcept;

/// Parses delimiter-separated text (RFC 4180 quoting) whose first record is
/// the header row. Throws EmptyTableError on empty input and ParseError (with
/// the record index, header = 0) on ragged rows or unterminated quotes.
Table ingest_csv(std::istream& source, std::string id, char delimiter = ',');

/// Writes `table` back as CSV. Absent cells are written as empty fields.
void write_csv(std::ostream& out, const Table& table, char delimiter = ',');

/// Builds a table from a Socrata JSON record array. Field order follows first
/// appearance across records; at most `limit` rows are kept. Throws
/// DecodeError when the payload is not an array of objects.
Table table_from_socrata_json(std::string_view payload, std::string id,
                              std::size_t limit);

/// GET {domain}/resource/{dataset_id}.json?$limit={limit}. `domain` may carry
/// an explicit http:// or https:// scheme; bare hosts use https. The app token
/// is read from NAMEGUESS_SOCRATA_TOKEN when set. Throws InputError for
/// limit == 0, TransportError on non-2xx or connection failure.
Table fetch_socrata(std::string_view domain, std::string_view dataset_id,
                    std::size_t limit);

struct FilterCriteria {
  std::size_t min_rows = 5;
  std::size_t min_cols = 5;
  double max_nan_fraction = 0.5;
  double max_duplicate_name_fraction = 0.5;
  std::size_t max_rows_retained = 1000;

  /// Throws InputError when a ratio is outside [0, 1], a count is zero, or
  /// max_rows_retained < min_rows.
  void validate() const;
};

struct Rejection {
  std::string id;
  std::string reason;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
};

struct FilterResult {
  std::vector<Table> kept;
  std::vector<Rejection> rejected;
};

inline constexpr std::string_view kTooFewRows = "too few rows";
inline constexpr std::string_view kTooFewColumns = "too few columns";
inline constexpr std::string_view kNanFraction = "NaN fraction";
inline constexpr std::string_view kDuplicateNames = "duplicate column names";

double nan_fraction(const Table& table) noexcept;

/// 1 - distinct/n_cols, case-sensitive. 0 for a table without columns.
double duplicate_name_fraction(const Table& table) noexcept;

/// Splits `tables` into kept and rejected. Tables are truncated to
/// max_rows_retained rows first and the criteria are evaluated on the
/// truncated table, which makes the filter idempotent. Each rejection names
/// the first failing criterion in the order rows, columns, NaN, duplicates.
FilterResult filter_tables(std::vector<Table> tables, const FilterCriteria& criteria);

/// One line of the corpus manifest.
nlohmann::ordered_json manifest_entry(const Table& kept);
nlohmann::ordered_json manifest_entry(const Rejection& rejected);

}  // namespace nameguess
