#pragma once

#include <string>
#include <vector>

namespace wdisc::cli {

/// Runs the `wdiscood` command line. Exit codes: 0 success, 1 usage error,
/// 2 data error, 3 numerical failure.
int run(const std::vector<std::string>& args);

int run_cli(int argc, const char* const* argv);

}  // namespace wdisc::cli
