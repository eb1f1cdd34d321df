#pragma once

#include "config.hpp"

#include <iosfwd>
#include <optional>

namespace cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitInversion = 2,
  kExitVerification = 3,
  kExitLocalization = 4,
};

struct Overrides {
  std::optional<double> tolerance;
};

/// Runs the configured command. Reports go to `out` unless the config names
/// an output path; solve writes its CSV there instead and the report to
/// `out`, or the CSV to `out` and the report to `log` when no path is given.
/// Library exceptions propagate; main maps them to exit codes.
int run(const RunConfig& config, const Overrides& overrides, std::ostream& out, std::ostream& log);

}  // namespace cli
