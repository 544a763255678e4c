#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frisch {

/** Run the command-line front end.
 *
 * `args` are the tokens after the program name. Primary output goes to
 * `out` unless redirected by --output; diagnostics and the run manifest
 * (when no output file is involved) go to `err`.
 *
 * Exit codes: 0 success / verification passed; 1 validation or theorem
 * check failed; 2 bad input.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frisch
