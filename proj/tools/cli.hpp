#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrv::cli {

/// Runs the `lrv` command line. Results go to `out` unless --out is given; diagnostics go
/// to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrv::cli
