// Command implementations behind the `rotphc` executable.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rotphc/config.hpp"

namespace rotphc {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitValidation = 3 };

struct CheckResult {
  std::string name;
  double measured;
  double tolerance;
  bool pass;  // measured <= tolerance
};

struct ValidationOptions {
  bool inject_nonhermitian = false;  // negative control for the Hermiticity check
};

/// The invariant suite run by `validate`.
std::vector<CheckResult> run_validation(const RunConfig& c, const ValidationOptions& opt, std::ostream& log);

/// Creates the output directory and writes config.json and VERSION into it.
void prepare_output(const RunConfig& c);

int cmd_bands(const RunConfig& c, std::ostream& log);
int cmd_splitting(const RunConfig& c, std::ostream& log);
int cmd_sweep(const RunConfig& c, std::ostream& log);
int cmd_eta(const RunConfig& c, std::ostream& log);
int cmd_classify(const RunConfig& c, std::ostream& log);
int cmd_validate(const RunConfig& c, const ValidationOptions& opt, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rotphc
