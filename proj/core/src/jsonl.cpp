#include "nameguess/jsonl.hpp"

#include "nameguess/error.hpp"

namespace nameguess {

void for_each_jsonl(const std::string& path, const std::function<void(nlohmann::json&&)>& fn) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DecodeError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    fn(std::move(j));
  }
}

JsonlWriter::JsonlWriter(const std::string& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc), path_(path) {
  if (!out_) throw InputError("cannot open " + path + " for writing");
}

void JsonlWriter::write_line(const std::string& line) {
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw Error("write to " + path_ + " failed");
}

}  // namespace nameguess
