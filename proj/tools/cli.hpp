#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fmh::cli {

/// Runs the fmh command line. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 input or validation error, 2 numerical
/// failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fmh::cli
