#pragma once

// Command-line front end: argument validation, dispatch to the library, and
// CSV/JSON output. Exit codes: 0 success, 2 invalid input, 1 numerical failure
// or a failing reproduction check.

#include <iosfwd>
#include <string>
#include <vector>

namespace freeconv::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitValidation = 2;

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freeconv::cli
