#include "nameguess/promptkit.hpp"

#include <algorithm>
#include <unordered_set>

#include "nameguess/error.hpp"

namespace nameguess {

namespace {

std::string join(std::span<const std::string> items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string truncate_cell(const std::string& v) {
  return v.size() > kMaxCellChars ? v.substr(0, kMaxCellChars) : v;
}

// Distinct present values of a column, in row order, untruncated.
std::vector<std::string> distinct_values(const Table& table, std::size_t column_index,
                                         std::size_t limit) {
  if (column_index >= table.n_cols()) {
    throw InputError("column " + std::to_string(column_index) + " out of range for table '" +
                     table.id + "'");
  }
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& row : table.cells) {
    if (out.size() == limit) break;
    const auto& cell = row[column_index];
    if (!cell) continue;
    if (seen.insert(*cell).second) out.push_back(*cell);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }

}  // namespace

std::vector<std::string> sample_cells(const Table& table, std::size_t column_index,
                                      std::size_t n) {
  auto values = distinct_values(table, column_index, n);
  for (auto& v : values) v = truncate_cell(v);
  return values;
}

std::vector<std::string> sample_cells_random(const Table& table, std::size_t column_index,
                                             std::size_t n, Rng& rng) {
  auto values = distinct_values(table, column_index, table.n_rows());
  if (values.size() > n) {
    // Partial Fisher-Yates over indices, then restore row order.
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> picked;
    picked.reserve(n);
    for (auto i : idx) picked.push_back(std::move(values[i]));
    values = std::move(picked);
  }
  for (auto& v : values) v = truncate_cell(v);
  return values;
}

std::vector<std::vector<std::size_t>> chunk_columns(std::span<const std::size_t> columns,
                                                    std::size_t k) {
  if (k == 0) throw InputError("chunk_columns: K must be at least 1");
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < columns.size(); i += k) {
    const auto end = std::min(columns.size(), i + k);
    groups.emplace_back(columns.begin() + static_cast<std::ptrdiff_t>(i),
                        columns.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return groups;
}

std::vector<std::vector<std::size_t>> chunk_columns(const Table& table, std::size_t k) {
  std::vector<std::size_t> all(table.n_cols());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return chunk_columns(all, k);
}

std::string linearize_context(std::span<const ContextColumn> columns, std::size_t n) {
  std::string out = "Column names: ";
  std::size_t rows = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ", ";
    out += columns[i].query_name;
    rows = std::max(rows, columns[i].values.size());
  }
  rows = std::min(rows, n);
  for (std::size_t r = 0; r < rows; ++r) {
    out += " <SEP> row ";
    out += std::to_string(r + 1);
    out += ": ";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ", ";
      if (r < columns[i].values.size()) out += columns[i].values[r];
    }
  }
  return out;
}

std::string linearize_context(const Table& table, std::span<const std::size_t> group,
                              std::span<const std::string> query_names, std::size_t n) {
  if (group.size() != query_names.size()) {
    throw InputError("linearize_context: group and query name counts differ");
  }
  std::vector<ContextColumn> columns;
  columns.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    columns.push_back({query_names[i], sample_cells(table, group[i], n)});
  }
  return linearize_context(columns, n);
}

std::string build_training_prompt(std::string_view context,
                                  std::span<const std::string> queries,
                                  std::span<const std::string> golds) {
  if (queries.empty()) throw InputError("training prompt needs at least one query");
  if (queries.size() != golds.size()) {
    throw InputError("training prompt has " + std::to_string(queries.size()) + " queries but " +
                     std::to_string(golds.size()) + " golds");
  }
  std::string out(context);
  if (!out.empty()) out.push_back('\n');
  out += kTaskPrefix;
  out += join(queries, "|");
  out += " stand for ";
  out += join(golds, "|");
  out += '.';
  return out;
}

std::string build_inference_prompt(std::string_view context,
                                   std::span<const std::string> queries, bool with_demo) {
  if (queries.empty()) throw InputError("inference prompt needs at least one query");
  std::string out;
  if (with_demo) {
    out += kDemonstration;
    out.push_back('\n');
  }
  if (!context.empty()) {
    out += context;
    out.push_back('\n');
  }
  out += kTaskPrefix;
  out += join(queries, "|");
  out += " stand for";
  return out;
}

std::optional<std::vector<std::string>> extract_answers(std::string_view completion,
                                                        std::size_t k) {
  if (k == 0) throw InputError("extract_answers: K must be at least 1");
  std::size_t end = completion.size();
  for (std::string_view marker : {"<EOS>", "</s>", "<|endoftext|>"}) {
    end = std::min(end, completion.find(marker));
  }
  for (std::size_t i = 0; i < end; ++i) {
    const char c = completion[i];
    if (c == '\n') {
      end = i;
      break;
    }
    if (c != '.') continue;
    const bool at_end = i + 1 >= end;
    const bool newline = !at_end && (completion[i + 1] == '\n' || completion[i + 1] == '\r');
    const bool sentence = i + 2 < end && completion[i + 1] == ' ' && is_upper(completion[i + 2]);
    if (at_end || newline || sentence) {
      end = i;
      break;
    }
  }

  std::vector<std::string> parts;
  const std::string_view body = completion.substr(0, end);
  std::size_t start = 0;
  while (true) {
    const auto bar = body.find('|', start);
    const auto piece = trim(body.substr(start, bar == std::string_view::npos ? bar : bar - start));
    if (piece.empty()) return std::nullopt;
    parts.emplace_back(piece);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (parts.size() != k) return std::nullopt;
  return parts;
}

nlohmann::ordered_json to_json(const PromptBundle& b) {
  nlohmann::ordered_json j;
  j["bundle_id"] = b.bundle_id;
  j["table_id"] = b.table_id;
  j["columns"] = b.column_indices;
  j["query_names"] = b.query_names;
  j["prompt"] = b.prompt;
  j["golds"] = b.golds ? nlohmann::ordered_json(*b.golds) : nlohmann::ordered_json(nullptr);
  j["demo_included"] = b.demo_included;
  return j;
}

PromptBundle bundle_from_json(const nlohmann::json& j) {
  PromptBundle b;
  try {
    b.bundle_id = j.at("bundle_id").get<std::string>();
    b.table_id = j.at("table_id").get<std::string>();
    b.column_indices = j.at("columns").get<std::vector<std::size_t>>();
    b.query_names = j.at("query_names").get<std::vector<std::string>>();
    b.prompt = j.at("prompt").get<std::string>();
    if (auto it = j.find("golds"); it != j.end() && !it->is_null()) {
      b.golds = it->get<std::vector<std::string>>();
    }
    b.demo_included = j.value("demo_included", false);
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed prompt bundle: ") + e.what());
  }
  if (b.column_indices.size() != b.query_names.size()) {
    throw DecodeError("prompt bundle " + b.bundle_id + " has mismatched columns/query_names");
  }
  return b;
}

std::vector<PromptBundle> build_bundles(const Table& table, std::span<const NamePair> pairs,
                                        const PromptOptions& options) {
  std::vector<const NamePair*> ordered;
  ordered.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.table_id != table.id) {
      throw InputError("pair for table '" + p.table_id + "' passed with table '" + table.id + "'");
    }
    ordered.push_back(&p);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const NamePair* a, const NamePair* b) {
    return a->column_index < b->column_index;
  });

  std::vector<std::size_t> columns;
  for (const auto* p : ordered) columns.push_back(p->column_index);
  const auto groups = chunk_columns(columns, options.k);

  std::optional<Rng> rng;
  if (options.sample_seed) rng.emplace(Rng::derive_seed(*options.sample_seed, table.id));

  std::vector<PromptBundle> bundles;
  std::size_t offset = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    PromptBundle b;
    b.bundle_id = table.id + "#" + std::to_string(g);
    b.table_id = table.id;
    b.column_indices = groups[g];
    std::vector<std::string> golds;
    std::vector<ContextColumn> ctx;
    for (std::size_t i = 0; i < groups[g].size(); ++i) {
      const NamePair& p = *ordered[offset + i];
      b.query_names.push_back(p.query_name);
      golds.push_back(p.logical_name);
      if (options.with_context) {
        auto values = rng ? sample_cells_random(table, p.column_index, options.n, *rng)
                          : sample_cells(table, p.column_index, options.n);
        ctx.push_back({p.query_name, std::move(values)});
      }
    }
    offset += groups[g].size();
    if (options.with_context) b.context = linearize_context(ctx, options.n);
    if (options.mode == PromptMode::train) {
      b.prompt = build_training_prompt(b.context, b.query_names, golds);
      b.golds = std::move(golds);
    } else {
      b.prompt = build_inference_prompt(b.context, b.query_names, options.with_demo);
      b.demo_included = options.with_demo;
    }
    bundles.push_back(std::move(b));
  }
  return bundles;
}

}  // namespace nameguess
