#pragma once

#include <fstream>
#include <functional>
#include <mutex>
#include <string>

#include <json.hpp>

namespace nameguess {

/// Calls `fn` for every non-blank line of a JSON-lines file. Parse failures
/// throw DecodeError naming the line number.
void for_each_jsonl(const std::string& path, const std::function<void(nlohmann::json&&)>& fn);

/// Appends one JSON value per line. Each line is written and flushed whole,
/// so an interrupted run leaves only complete records. Thread-safe.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path, bool append = false);

  template <typename Json>
  void write(const Json& value) {
    write_line(value.dump());
  }
  void write_line(const std::string& line);

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::string path_;
};

}  // namespace nameguess
