#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace p2dyn {

enum ExitStatus : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitParse = 2,
  kExitIo = 3,
  kExitNonConvergence = 4,
};

struct CommandOptions {
  std::string spec_path;
  std::string map;  // may be empty when the file declares a single candidate
  std::string job;
  bool json = false;
  long q_max = 64;
  double tol = 1e-9;
  // Unset flags fall back to the job's own arguments, then to the defaults.
  std::optional<double> eps;
  std::optional<int> max_iter;
  std::optional<std::string> out;
  unsigned threads = 0;  // basin_field workers; 0 picks the hardware count
};

// Every command writes its report to `out` (one JSON object with --json) and
// diagnostics to `err`, and returns an ExitStatus code.
int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_canonicalize(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_classify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_julia(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_steiner(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_orbit(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Built-in smoke checks needing no input file.
int cmd_selftest(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace p2dyn
