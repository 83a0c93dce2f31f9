#pragma once

#include <iosfwd>

namespace rrk::cli {

/// Exit codes: 0 converged (or breakdown with the NE criterion met),
/// 2 not converged (result still written), 1 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rrk::cli
