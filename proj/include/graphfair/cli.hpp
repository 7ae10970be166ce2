#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphfair {

// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kNegative = 1, kUsage = 2, kCapExceeded = 3 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphfair
