#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/parabolic.hpp"
#include "kirchlab/remainder.hpp"
#include "kirchlab/spectral.hpp"

namespace kirchlab {

struct Window {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(double t) const { return t >= lo && t <= hi; }
};

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  Window window;
};

/// Least-squares fit of log(values) against log(1 + t) over the window.
/// Requires at least five samples inside the window, all strictly positive.
[[nodiscard]] RateFit fit_rate(std::span<const double> times,
                               std::span<const double> values, Window window);

/// One audited inequality: the measured constant is the best (smallest upper
/// or largest lower) constant for which the bound holds on the window.
struct AuditEntry {
  std::string name;      ///< catalog tag, e.g. "(3.18) upper"
  std::string ref;       ///< catalog group, serialized under "paper_ref"
  double constant = 0.0;
  Window window;
  std::string verdict;   ///< "pass", "fail" or "info"
};

struct AuditMetadata {
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double gamma = 1.0;
  double mu = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> nu;
  std::optional<double> delta;
  std::string regime;
  std::vector<double> eigenvalues;
  double lower_floor = 0.0;
  double monotonicity_slack = 0.0;
};

struct AuditReport {
  std::string title;
  AuditMetadata meta;
  std::vector<AuditEntry> entries;

  [[nodiscard]] bool passed() const {
    for (const auto& e : entries) {
      if (e.verdict == "fail") return false;
    }
    return true;
  }
};

struct AuditOptions {
  /// Positive floor demanded of lower-bound constants.
  double lower_floor = 1e-6;
  /// Slack scale for the pointwise monotonicity inequality.
  double monotonicity_slack = 1e-12;
  /// Window used for the two-sided band entries; sups use the whole grid.
  Window band_window;
};

/// Decay-rate entries (3.11)-(3.25): power-law sups for the limit and the
/// perturbed solution, the weighted second-derivative integrals at exponent
/// `delta`, the remainder sup and dissipation integral, and the pointwise
/// monotonicity inequality.
[[nodiscard]] AuditReport audit_theorem_A(const ParabolicTrajectory& par,
                                          const HyperbolicTrajectory& hyp,
                                          const RemainderSeries& rem, double delta,
                                          const AuditOptions& opt = {});

/// Two-sided growth of exp(2 mu gamma C) and exp(2 nu gamma C_eps) against
/// (1+t), entries (3.33)-(3.36), plus the weighted component bounds
/// (3.26)-(3.28). Requires coercive data (no kernel component).
[[nodiscard]] AuditReport audit_prop31_and_B(const ParabolicTrajectory& par,
                                             const HyperbolicTrajectory& hyp,
                                             const MuNuProfile& profile,
                                             const AuditOptions& opt = {});

/// Normalized decay statistics of both statements of the main estimate;
/// requires nu <= mu (deteriorated or collinear regime).
[[nodiscard]] AuditReport audit_theorem_2_2(const RemainderSeries& rem,
                                            const MuNuProfile& profile);

/// Forcing term g = -(c_eps - c) A u - eps u'' on the shared grid.
struct GSeries {
  double epsilon = 0.0;
  std::vector<double> times;
  std::vector<SpectralVector> g;
  std::vector<double> g_sq;       ///< |g|^2
  std::vector<double> g_half_sq;  ///< |A^{1/2} g|^2
};

[[nodiscard]] GSeries compute_g(const ParabolicTrajectory& par,
                                const HyperbolicTrajectory& hyp);

/// Forcing-term hypotheses (3.29)-(3.32) at exponent `delta`.
[[nodiscard]] AuditReport audit_prop_C(const GSeries& g, const RemainderSeries& rem,
                                       double delta);

/// max over the grid of (1+t)^{delta/gamma} |rho(t)|^2.
[[nodiscard]] double sup_weighted_rho(const RemainderSeries& rem, double delta);

/// Same maximum, with the preconditions of the lower-bound theorem: the
/// profile must have nu <= mu and the grid must contain t = eps^{-delta}.
[[nodiscard]] double optimality_statistic(const RemainderSeries& rem,
                                          const MuNuProfile& profile);

/// Slope of log(statistic) against log(eps); needs at least three ladder
/// points. A statistic scaling like eps^2 yields exponent 2.
[[nodiscard]] RateFit sweep_convergence(std::span<const double> epsilons,
                                        std::span<const double> statistics);

}  // namespace kirchlab
