#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kirchlab/config.hpp"
#include "kirchlab/report.hpp"

namespace kirchlab {

enum class RunMode {
  full,        ///< per-run CSV + JSON plus the ladder summary
  sweep_only,  ///< ladder summary only
};

struct ExperimentOutcome {
  int exit_code = 0;  ///< 0 pass, 1 audit fail, 2 config/regime, 3 solver failure
  std::string error;  ///< first failure message, ladder order, empty on success
  std::vector<RunResult> runs;
  LadderSummary summary;
  std::vector<std::string> files;  ///< artifact paths actually written
};

/// Executes every ladder point on a pool of config.threads workers, runs the
/// requested audits, and writes artifacts under config.out_dir. Outputs are
/// byte-identical for identical configs regardless of the thread count: the
/// workers only fill per-ladder-point slots and all serialization happens
/// afterwards on one thread, in ladder order.
[[nodiscard]] ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                               RunMode mode, std::ostream& log);

/// Maps an exception from a run to the CLI exit code contract.
[[nodiscard]] int exit_code_for(const std::exception& e);

}  // namespace kirchlab
