#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kirchlab::verify {

struct CriterionResult {
  std::string id;      ///< "C1" .. "C11"
  std::string title;
  bool passed = false;
  std::string detail;  ///< measured numbers vs thresholds
};

/// Suite names accepted by run_suite, "all" last.
[[nodiscard]] const std::vector<std::string>& suite_names();

[[nodiscard]] bool known_suite(const std::string& name);

/// Runs the named suite, printing one pass/fail line per criterion as it
/// completes, and returns the per-criterion results. Solver runs are shared
/// across the criteria of one invocation. Throws ConfigError for an unknown
/// suite name.
std::vector<CriterionResult> run_suite_results(const std::string& name,
                                               std::ostream& out);

/// Convenience wrapper: 0 when every criterion passed, 1 when one failed,
/// 2 for an unknown suite name.
int run_suite(const std::string& name, std::ostream& out);

}  // namespace kirchlab::verify
