#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvbft::cli {

/// Parses and runs one subcommand. `args` excludes the program name.
/// Returns the process exit status; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvbft::cli
