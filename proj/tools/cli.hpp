#pragma once

#include <string>
#include <vector>

namespace finsler::cli {

/// Exit codes: 0 all checks pass, 1 a numerical check failed (the report is
/// still written), 2 invalid input or spec.
constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace finsler::cli
