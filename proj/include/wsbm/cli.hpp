#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wsbm::cli {

// Entry point of the `wsbm` tool, callable in-process for tests.
// args excludes the program name. Writes results to `out`, diagnostics
// and the resolved-config echo to `err`. Returns 0 on success, 1 for
// invalid arguments or malformed input, 2 for runtime failures.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace wsbm::cli
