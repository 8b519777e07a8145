#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ier::cli {

/// Process exit codes.
enum Exit : int {
  kAccept = 0,  // also plain success
  kReject = 1,
  kUsage = 2,   // bad flags, bad config, invalid input files
  kRuntime = 3, // I/O failure, spectral failure
};

/// Runs `iertest <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ier::cli
