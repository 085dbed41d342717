#pragma once

#include <string>
#include <vector>

#include "kirchlab/spectral.hpp"

namespace kirchlab {

/// One experiment definition: operator, data, epsilon ladder, grid and
/// tolerance knobs, and the list of audits to run. Parsed from a sectioned
/// key-value file; see README for the grammar.
struct ExperimentConfig {
  std::vector<double> eigenvalues;

  std::vector<double> u0;
  std::vector<double> u1;  ///< zeros when omitted
  double gamma = 1.0;

  std::vector<double> ladder;
  double horizon = 1e3;
  int samples_per_decade = 16;
  double rel_tol_parabolic = 1e-10;
  double rel_tol_hyperbolic = 1e-9;
  double tol_energy = 1e-9;  ///< per-sample energy growth allowance, as a fraction of E(0)
  std::string regime = "auto";  ///< "auto" or an expected classification
  int threads = 1;
  std::string out_dir = "out";

  std::vector<std::string> audits;
  double lower_floor = 1e-6;
  double slack = 1e-12;
};

/// Parses the sectioned key-value grammar. Unknown sections, unknown keys,
/// duplicate keys, and malformed numbers raise ConfigError with a line number.
[[nodiscard]] ExperimentConfig parse_config(const std::string& text);

/// parse_config on the contents of `path`.
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Semantic validation: dimensions agree, ladder within (0, 0.5], horizon
/// positive, audit names known, and a declared regime matches the data.
/// Returns the classification so callers do not re-derive it.
[[nodiscard]] MuNuProfile validate_config(const ExperimentConfig& config);

/// The audit names validate_config accepts.
[[nodiscard]] const std::vector<std::string>& known_audits();

}  // namespace kirchlab
