#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace etr::cli {

// Exit codes: 0 success, 2 a condition failed or was inconclusive, 1 error.
// The JSON report goes to out, a short human summary to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etr::cli
