#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phidiv::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kBdViolation = 3;
inline constexpr int kDegenerate = 4;

// Runs one invocation. The requested document goes to `out`; diagnostics go
// to `err`, one line each, error lines prefixed "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phidiv::cli
