#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foasl {

// Exit codes of run_cli.
enum ExitCode : int {
  kExitOk = 0,        // Proved / no counterexample / parsed
  kExitNegative = 1,  // NotProved / counterexample found
  kExitError = 2,     // usage, parse, IO, or failed proof check
};

// args excludes the program name, e.g. {"prove", "f.fo", "--theory", "reynolds"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foasl
