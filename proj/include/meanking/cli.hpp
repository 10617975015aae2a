#pragma once

#include <string>
#include <vector>

namespace meanking {

// Command-line front end. Exit codes: 0 pass, 1 verification or success
// failure, 2 usage/input error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace meanking
