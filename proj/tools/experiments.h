#pragma once

#include <string>

#include <json.hpp>

#include "manifest.h"

namespace roughwave {
namespace cli {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNumericError = 3,
  kAcceptanceFailure = 4,
};

struct RunContext {
  /// Resolved config (every section and key present).
  nlohmann::json config;
  int jobs = 1;
  /// Validates the cond-N inequalities on paper-strict sequences before a
  /// counterexample or quasimode run.
  bool strict_paper = false;
};

/// Runs the experiment named by config.experiment.kind into `out` and
/// returns the exit code. Artifacts written before a numeric failure stay in
/// the manifest. Throws ConfigError for invalid configs and NumericError
/// (incl. ScaleOutOfReach) when a run cannot finish.
int RunExperiment(const RunContext& ctx, OutputWriter& out);

/// Reduced acceptance suite; prints one line per criterion to stdout.
int RunSelftest(int jobs, OutputWriter* out);

}  // namespace cli
}  // namespace roughwave
