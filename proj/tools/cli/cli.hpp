#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nameguess::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitEndpoint = 2;

/// Runs the tool with `args` (without the program name). Normal output goes
/// to `out`, logs and errors to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Data directory holding lexicon.txt, vocabulary.txt, lookup.tsv and
/// acronyms.tsv: NAMEGUESS_DATA_DIR, else the installed copy, else the
/// source tree.
std::string default_data_dir();

}  // namespace nameguess::cli
