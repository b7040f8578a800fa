#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellgate::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNumericalError = 3,
};

/// Runs one invocation. args excludes the program name. Results go to out
/// (or the --out file); failures print an error JSON object to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellgate::cli
