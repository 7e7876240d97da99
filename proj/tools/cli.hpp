#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace evolflow::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Parses "a:b:step" (inclusive, last interval may be short), a single
/// number, an inline JSON list "[...]", or a path to a file holding a JSON
/// list. Throws Error{BadGrid}.
std::vector<double> parse_grid(std::string_view spec);

/// Runs one subcommand. args excludes the program name. JSON report goes to
/// `out`, human-readable summary and usage errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evolflow::cli
