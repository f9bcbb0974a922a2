#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matchlab::cli {

inline constexpr const char* kToolName = "matchlab";
inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line. Returns the process exit code: 0 on success, 1 on a
/// library error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace matchlab::cli
