#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polycover::cli {

/// Runs one command. The JSON report goes to `out` (or to --output), messages
/// to `err`. Exit codes: 0 verdict computed, 2 input or precondition error,
/// 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polycover::cli
