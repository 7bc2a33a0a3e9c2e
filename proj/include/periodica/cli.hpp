#pragma once

// Command-line front end. Exit codes: 0 success, 1 a reproduced table did
// not match its reference, 2 usage error, 3 numerical or admissibility
// error.

#include <ostream>
#include <string>
#include <vector>

namespace periodica::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable overriding the default precision in bits.
inline constexpr const char* kDefaultBitsEnv = "FPA_DEFAULT_BITS";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace periodica::cli
