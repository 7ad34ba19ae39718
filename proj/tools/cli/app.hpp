#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cho::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line (without the program name). Results go to out,
/// machine-readable error objects to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cho::cli
