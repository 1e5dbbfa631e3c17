#include <cstdlib>
#include <unordered_map>

#include <httplib.h>

#include "nameguess/corpus.hpp"
#include "nameguess/error.hpp"

namespace nameguess {

namespace {

Cell cell_from_json(const nlohmann::ordered_json& v) {
  if (v.is_null()) return std::nullopt;
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (is_nan_token(s)) return std::nullopt;
  return s;
}

}  // namespace

Table table_from_socrata_json(std::string_view payload, std::string id, std::size_t limit) {
  nlohmann::ordered_json records;
  try {
    records = nlohmann::ordered_json::parse(payload);
  } catch (const nlohmann::json::parse_error& e) {
    throw DecodeError("socrata payload for '" + id + "' is not JSON: " + e.what());
  }
  if (!records.is_array()) {
    throw DecodeError("socrata payload for '" + id + "' is not a JSON array");
  }

  Table table;
  table.id = std::move(id);
  std::unordered_map<std::string, std::size_t> column_of;
  std::size_t taken = 0;
  for (const auto& rec : records) {
    if (taken == limit) break;
    if (!rec.is_object()) {
      throw DecodeError("socrata record " + std::to_string(taken) + " is not an object");
    }
    for (auto it = rec.begin(); it != rec.end(); ++it) {
      if (column_of.emplace(it.key(), table.headers.size()).second) {
        table.headers.push_back(it.key());
      }
    }
    ++taken;
  }
  taken = 0;
  for (const auto& rec : records) {
    if (taken == limit) break;
    std::vector<Cell> row(table.headers.size());
    for (auto it = rec.begin(); it != rec.end(); ++it) {
      row[column_of.at(it.key())] = cell_from_json(it.value());
    }
    table.cells.push_back(std::move(row));
    ++taken;
  }
  return table;
}

Table fetch_socrata(std::string_view domain, std::string_view dataset_id, std::size_t limit) {
  if (limit == 0) throw InputError("fetch_socrata: limit must be at least 1");
  if (dataset_id.empty()) throw InputError("fetch_socrata: empty dataset id");

  std::string base(domain);
  if (base.rfind("http://", 0) != 0 && base.rfind("https://", 0) != 0) {
    base = "https://" + base;
  }
  httplib::Client client(base);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);

  httplib::Headers headers;
  if (const char* token = std::getenv("NAMEGUESS_SOCRATA_TOKEN"); token && *token) {
    headers.emplace("X-App-Token", token);
  }
  const std::string path =
      "/resource/" + std::string(dataset_id) + ".json?$limit=" + std::to_string(limit);
  auto res = client.Get(path, headers);
  if (!res) {
    throw TransportError("socrata request to " + base + path + " failed: " +
                             httplib::to_string(res.error()),
                         0);
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("socrata request to " + base + path + " returned HTTP " +
                             std::to_string(res->status),
                         res->status);
  }
  return table_from_socrata_json(res->body, std::string(dataset_id), limit);
}

}  // namespace nameguess
