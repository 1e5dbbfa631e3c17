#include "support.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nameguess/error.hpp"

namespace fs = std::filesystem;

namespace nameguess::cli {

void Logger::info(const std::string& msg, const nlohmann::json& fields) { log("info", msg, fields); }
void Logger::warn(const std::string& msg, const nlohmann::json& fields) { log("warn", msg, fields); }
void Logger::error(const std::string& msg, const nlohmann::json& fields) {
  log("error", msg, fields);
}

void Logger::log(const char* level, const std::string& msg, const nlohmann::json& fields) {
  if (json_) {
    nlohmann::ordered_json j;
    j["level"] = level;
    j["msg"] = msg;
    for (const auto& [k, v] : fields.items()) j[k] = v;
    sink_ << j.dump() << '\n';
  } else {
    sink_ << level << ": " << msg;
    for (const auto& [k, v] : fields.items()) sink_ << ' ' << k << '=' << v.dump();
    sink_ << '\n';
  }
  sink_.flush();
}

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)),
      started_(std::chrono::system_clock::now()),
      start_mono_(std::chrono::steady_clock::now()) {}

nlohmann::ordered_json RunManifest::to_json() const {
  const std::time_t t = std::chrono::system_clock::to_time_t(started_);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");

  nlohmann::ordered_json j;
  j["command"] = command_;
  j["argv"] = argv_;
  j["tool_version"] = NAMEGUESS_VERSION;
  j["seed"] = seed_ ? nlohmann::ordered_json(*seed_) : nlohmann::ordered_json(nullptr);
  j["config"] = config_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["counts"] = counts_;
  j["started_at"] = ts.str();
  j["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_mono_).count();
  return j;
}

void RunManifest::write(const fs::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest " + path.string());
  out << to_json().dump(2) << '\n';
}

fs::path manifest_path_for(const fs::path& output) {
  return fs::path(output.string() + ".run.json");
}

void require_file(const std::string& path, const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw InputError(what + " not found: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  require_file(path, "JSON file");
  std::ifstream in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(path + ": " + e.what());
  }
}

std::vector<Table> load_tables(const std::string& path, char delimiter) {
  std::error_code ec;
  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path, ec)) {
    files.emplace_back(path);
  } else {
    throw InputError("tables path not found: " + path);
  }

  std::vector<Table> tables;
  tables.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw InputError("cannot open " + f.string());
    try {
      tables.push_back(ingest_csv(in, f.stem().string(), delimiter));
    } catch (const ParseError& e) {
      throw ParseError(f.string() + ": " + e.what(), e.row());
    } catch (const EmptyTableError& e) {
      throw EmptyTableError(f.string() + ": " + e.what());
    }
  }
  index_tables(tables);
  return tables;
}

std::map<std::string, std::size_t> index_tables(const std::vector<Table>& tables) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (!idx.emplace(tables[i].id, i).second) {
      throw InputError("duplicate table id '" + tables[i].id + "'");
    }
  }
  return idx;
}

std::map<PairKey, const NamePair*> index_pairs(const std::vector<NamePair>& pairs) {
  std::map<PairKey, const NamePair*> idx;
  for (const auto& p : pairs) {
    if (!idx.emplace(PairKey{p.table_id, p.column_index}, &p).second) {
      throw InputError("duplicate pair for " + p.table_id + " column " +
                       std::to_string(p.column_index));
    }
  }
  return idx;
}

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw InputError(flag + " expects " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

}  // namespace nameguess::cli
