#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace klsat {

inline constexpr const char* kToolVersion = "0.1.0";

// Entry point behind the `klsat` binary; exposed so tests can run
// subcommands in-process and capture the streams. Exit codes: 0 success,
// 1 usage/config error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace klsat
