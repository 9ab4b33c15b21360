// Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage or
// parse error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nzs {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// "3" or "2..4"; throws std::invalid_argument.
std::vector<int> parse_n_range(const std::string& text);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nzs
