#pragma once

#include <iosfwd>

#include "liouville/config.hpp"

namespace liouville {

/// Exit codes of run().
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,     ///< validation or configuration error
  exit_numerical = 2,  ///< numerical breakdown or other module error
  exit_check = 3,      ///< algebra-check found a failing identity
};

/// Executes config.command.name. Output files are assembled in memory, written
/// to temporary names and renamed only when every file is complete, so a failed
/// run leaves no partial reports. A summary goes to `out`, errors to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace liouville
