#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smoothcode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTooLarge = 3;

/// Runs one CLI invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smoothcode::cli
