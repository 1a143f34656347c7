#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hierj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitEmptyGroundTruth = 3;

/// Runs the command line `args` (program name excluded). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker cap from HIERJ_THREADS, else the hardware concurrency (at least 1).
unsigned thread_cap();

}  // namespace hierj::cli
