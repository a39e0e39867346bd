#pragma once

#include <iosfwd>

namespace symorb::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,       // bad flags, unreadable or invalid config
    kBracket = 2,     // no sign change of the miss function
    kConvergence = 3, // bisection did not reach the tolerance
    kValidation = 4,  // orbit, symmetry or hypothesis checks failed
    kDomain = 5,      // trajectory left the annulus, no crossing, unbounded motion
};

/// Entry point of the `symorb` executable; writes reports to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symorb::cli
