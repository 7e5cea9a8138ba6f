#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ffba::cli {

/// Exit codes: 0 success, 1 usage or precision error, 2 verification failure.
enum Exit : int { Ok = 0, Usage = 1, VerificationFailed = 2 };

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ffba::cli
