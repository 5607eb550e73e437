#pragma once

// Batch front end. run() parses argv-style arguments, writes the report to
// `out` (or to --out) and returns the exit code:
//   0 success, 2 validation error, 3 precondition error, 4 resource cap.

#include <iosfwd>
#include <string>
#include <vector>

namespace qsc {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitValidation = 2, kExitPrecondition = 3, kExitResource = 4 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsc
