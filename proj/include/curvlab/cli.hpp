#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvlab {

/// Runs the curvlab command line (subcommands: report, verify, flow, example,
/// sweep). Results go to out, diagnostics (resolved configuration, warnings)
/// to err. Returns the process exit code: 0 success / all checks pass,
/// 1 checker failure, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvlab
