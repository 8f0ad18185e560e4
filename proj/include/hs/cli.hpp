#pragma once

// The `hs` command line: subcommands over the numerical modules with CSV
// output. Exit status 0 on success, 1 on invalid arguments or input, 2 when
// an eigenvalue search finds nothing.

#include <iosfwd>
#include <string>
#include <vector>

namespace hs::cli {

enum ExitCode : int { kSuccess = 0, kInvalid = 1, kNoCandidates = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hs::cli
