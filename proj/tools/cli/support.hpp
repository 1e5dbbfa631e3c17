#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nameguess/corpus.hpp"
#include "nameguess/fabricate.hpp"

namespace nameguess::cli {

/// Stderr logger; plain "level: message" lines or one JSON object per line.
class Logger {
 public:
  Logger(std::ostream& sink, bool json) : sink_(sink), json_(json) {}

  void info(const std::string& msg, const nlohmann::json& fields = nlohmann::json::object());
  void warn(const std::string& msg, const nlohmann::json& fields = nlohmann::json::object());
  void error(const std::string& msg, const nlohmann::json& fields = nlohmann::json::object());

 private:
  void log(const char* level, const std::string& msg, const nlohmann::json& fields);
  std::ostream& sink_;
  bool json_;
};

/// Record of one command invocation, written next to its main output.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set_config(nlohmann::ordered_json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void input(const std::string& role, const std::string& path) { inputs_[role] = path; }
  void output(const std::string& role, const std::string& path) { outputs_[role] = path; }
  void count(const std::string& key, std::size_t n) { counts_[key] = n; }
  void set_argv(std::vector<std::string> argv) { argv_ = std::move(argv); }

  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::map<std::string, std::size_t> counts_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point start_mono_;
};

/// "<path>.run.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

nlohmann::json read_json_file(const std::string& path);
void require_file(const std::string& path, const std::string& what);

/// Loads every *.csv under `path` (sorted by name), or `path` itself when it
/// is a file. The table id is the file stem. Duplicate ids are an error.
std::vector<Table> load_tables(const std::string& path, char delimiter = ',');

/// Table id -> index into `tables`.
std::map<std::string, std::size_t> index_tables(const std::vector<Table>& tables);

using PairKey = std::pair<std::string, std::size_t>;
std::map<PairKey, const NamePair*> index_pairs(const std::vector<NamePair>& pairs);

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& flag);

}  // namespace nameguess::cli
