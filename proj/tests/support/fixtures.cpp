#include "fixtures.hpp"

#include <array>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace ngtest {

std::string data_dir() {
  if (const char* env = std::getenv("NAMEGUESS_DATA_DIR"); env && *env) return env;
  return NAMEGUESS_TEST_DATA_DIR;
}

std::string data_file(const std::string& name) { return (fs::path(data_dir()) / name).string(); }

const nameguess::FrequencyLexicon& lexicon() {
  static const auto lex = nameguess::FrequencyLexicon::load_file(data_file("lexicon.txt"));
  return lex;
}

const nameguess::Vocabulary& vocabulary() {
  static const auto vocab = nameguess::Vocabulary::build_file(data_file("vocabulary.txt"));
  return vocab;
}

const nameguess::Dictionaries& dictionaries() {
  static const nameguess::Dictionaries dicts{
      nameguess::LookupDict::load_file(data_file("lookup.tsv")),
      nameguess::AcronymDict::load_file(data_file("acronyms.tsv"))};
  return dicts;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("nameguess-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

constexpr std::array<const char*, 72> kWords{
    "customer", "name", "account", "balance", "current", "date", "birth", "employee",
    "address", "city", "state", "zip", "code", "product", "price", "quantity",
    "order", "total", "amount", "fiscal", "year", "district", "school", "street",
    "number", "phone", "email", "status", "type", "category", "description", "start",
    "end", "time", "report", "permit", "license", "vehicle", "inspection", "violation",
    "payment", "tax", "property", "value", "unit", "count", "rate", "population",
    "median", "income", "household", "event", "mailing", "community", "area", "budget",
    "department", "agency", "contract", "vendor", "location", "latitude", "longitude", "program",
    "service", "request", "borough", "neighborhood", "average", "salary", "title", "grade"};

constexpr std::array<const char*, 6> kUncurated{"cust_id", "xfer_amt", "qty_oh", "sku",
                                                "txn_ts", "usr_cd"};

std::string title(const std::string& w) {
  std::string s = w;
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string make_header(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::uniform_int_distribution<int> style(0, 9);
  const int n = len(gen);
  std::vector<std::string> words;
  for (int i = 0; i < n; ++i) words.push_back(kWords[pick(gen)]);
  if (style(gen) == 0) words.push_back(std::to_string(1990 + static_cast<int>(gen() % 35)));
  const int s = style(gen);
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (s < 7) {
      if (i) out += ' ';
      out += title(words[i]);
    } else if (s < 9) {
      if (i) out += '_';
      out += words[i];
    } else {
      out += title(words[i]);
    }
  }
  return out;
}

}  // namespace

std::vector<nameguess::Table> synthetic_tables(std::size_t n_tables, std::size_t cols_per_table,
                                               std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<nameguess::Table> out;
  for (std::size_t t = 0; t < n_tables; ++t) {
    nameguess::Table table;
    char id[32];
    std::snprintf(id, sizeof id, "tbl%05zu", t);
    table.id = id;
    std::vector<std::string> seen;
    while (table.headers.size() < cols_per_table) {
      std::string h = gen() % 15 == 0 ? kUncurated[gen() % kUncurated.size()] : make_header(gen);
      if (std::find(seen.begin(), seen.end(), h) != seen.end()) continue;
      seen.push_back(h);
      table.headers.push_back(h);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<nameguess::Cell> row;
      for (std::size_t c = 0; c < cols_per_table; ++c) {
        if (gen() % 10 == 0) {
          row.emplace_back(std::nullopt);
        } else {
          row.emplace_back("v" + std::to_string(gen() % 50) + "_" + std::to_string(c));
        }
      }
      table.cells.push_back(std::move(row));
    }
    out.push_back(std::move(table));
  }
  return out;
}

void write_tables(const fs::path& dir, const std::vector<nameguess::Table>& tables) {
  fs::create_directories(dir);
  for (const auto& t : tables) {
    std::ofstream out(dir / (t.id + ".csv"), std::ios::binary);
    nameguess::write_csv(out, t);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ngtest
