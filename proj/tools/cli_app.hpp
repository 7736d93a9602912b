#pragma once

#include <iosfwd>

namespace drknn::cli {

/// Parses argv, runs one command, and writes the JSON report to `out` (or
/// the --out file). Returns the process exit code: 0 on success, 2 for a
/// configuration problem (the message names the field), 3 when numerics
/// fail or verification does not pass.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drknn::cli
