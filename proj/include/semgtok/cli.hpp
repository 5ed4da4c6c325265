// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace semgtok {

// Runs one CLI invocation (args excludes the program name). Exit codes:
// 0 success, 1 usage error, 2 data/validation error, 3 internal error.
// Errors are reported as a single machine-parseable line on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace semgtok
