#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nameguess/abbrev.hpp"
#include "nameguess/corpus.hpp"
#include "nameguess/segment.hpp"

namespace ngtest {

std::string data_dir();
std::string data_file(const std::string& name);

// Loaded once per process.
const nameguess::FrequencyLexicon& lexicon();
const nameguess::Vocabulary& vocabulary();
const nameguess::Dictionaries& dictionaries();

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

/// Synthetic open-data style tables: title-cased multi-word headers drawn
/// from common column words, optional year suffixes, and a few uncurated
/// headers. Deterministic for a seed.
std::vector<nameguess::Table> synthetic_tables(std::size_t n_tables, std::size_t cols_per_table,
                                               std::size_t rows, std::uint64_t seed);

/// Writes each table as <dir>/<id>.csv.
void write_tables(const std::filesystem::path& dir, const std::vector<nameguess::Table>& tables);

std::string read_file(const std::string& path);

}  // namespace ngtest
