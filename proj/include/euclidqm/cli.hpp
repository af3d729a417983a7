#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace euclidqm::cli {

/// Command-line parse errors count as configuration errors.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kIoError = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name, e.g. {"t-scan", "--config", "run.cfg", "--out", "out"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace euclidqm::cli
