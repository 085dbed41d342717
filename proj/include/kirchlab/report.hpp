#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kirchlab/audit.hpp"
#include "kirchlab/config.hpp"
#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/parabolic.hpp"
#include "kirchlab/remainder.hpp"

namespace kirchlab {

/// Everything one ladder point produces. Workers fill these concurrently;
/// serialization happens afterwards on one thread, in ladder order.
struct RunResult {
  double epsilon = 0.0;
  MuNuProfile profile;
  ParabolicTrajectory par;
  HyperbolicTrajectory hyp;
  RemainderSeries rem;
  GSeries g;
  bool has_remainders = false;
  bool has_g = false;
  std::vector<AuditReport> reports;
  std::vector<std::string> fit_names;
  std::vector<RateFit> fits;
  /// sup over the grid of (1+t)^{rate/gamma} |rho|^2 at the regime's rate.
  double statistic = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] bool passed() const {
    for (const auto& r : reports) {
      if (!r.passed()) return false;
    }
    return true;
  }
};

struct LadderSummary {
  std::vector<double> epsilons;
  std::vector<double> statistics;
  std::optional<RateFit> slope;  ///< log statistic vs log eps, >= 3 points
  struct Stability {
    std::string entry;
    double factor = 0.0;  ///< max/min of the entry's constant across the ladder
  };
  std::vector<Stability> stability;
  bool all_passed = true;
};

/// %.17g, enough digits to round-trip a double exactly.
[[nodiscard]] std::string format_double(double v);

/// The CSV column set is a function of the requested audit list alone, so
/// downstream plots survive config edits that do not change the audits.
[[nodiscard]] std::vector<std::string> csv_columns(const std::vector<std::string>& audits);

/// Renders the per-run time series as CSV with the columns of csv_columns.
[[nodiscard]] std::string run_csv(const RunResult& run,
                                  const std::vector<std::string>& audits);

/// Per-run JSON document: config echo, profile, audit entries, rate fits.
[[nodiscard]] std::string run_report_json(const ExperimentConfig& config,
                                          const RunResult& run);

/// Ladder-level JSON document: statistics per epsilon, convergence slope,
/// per-entry stability factors, overall verdict.
[[nodiscard]] std::string ladder_summary_json(const ExperimentConfig& config,
                                              const LadderSummary& summary);

}  // namespace kirchlab
