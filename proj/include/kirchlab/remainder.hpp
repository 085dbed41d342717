#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/parabolic.hpp"
#include "kirchlab/spectral.hpp"

namespace kirchlab {

struct CorrectorValue {
  SpectralVector value;       ///< eps (1 - e^{-t/eps}) theta0
  SpectralVector derivative;  ///< e^{-t/eps} theta0
};

/// Closed-form boundary-layer corrector.
[[nodiscard]] CorrectorValue corrector(const SpectralVector& theta0, double epsilon,
                                       double t);

/// Test oracle: integrates eps w'' + w' = 0, w(0) = 0, w'(0) = 1 numerically
/// and scales by theta0, for cross-checking the closed form.
struct CorrectorSeries {
  std::vector<double> times;
  std::vector<SpectralVector> value;
  std::vector<SpectralVector> derivative;
};
[[nodiscard]] CorrectorSeries corrector_oracle(const SpectralVector& theta0,
                                               double epsilon,
                                               std::span<const double> sample_times,
                                               double rel_tol = 1e-12);

/// Differences between the hyperbolic solution and its parabolic limit on a
/// shared grid: rho = u_eps - u and r' = rho' - theta_eps'.
struct RemainderSeries {
  double epsilon = 0.0;
  double gamma = 1.0;
  double delta = std::numeric_limits<double>::quiet_NaN();  ///< nu/mu when known
  std::vector<double> times;
  std::vector<SpectralVector> rho;
  std::vector<SpectralVector> r_prime;
  std::vector<double> rho_sq;           ///< |rho|^2
  std::vector<double> rho_half_sq;      ///< |A^{1/2} rho|^2
  std::vector<double> rho_full_sq;      ///< |A rho|^2
  std::vector<double> rho_prime_sq;     ///< |rho'|^2
  std::vector<double> r_prime_sq;       ///< |r'|^2
  std::vector<double> r_prime_half_sq;  ///< |A^{1/2} r'|^2
};

/// Builds the remainder series. Both trajectories must share the sample grid
/// and the operator; mismatch raises GridError. When a profile is supplied
/// its delta (if any) is recorded on the series.
[[nodiscard]] RemainderSeries build_remainders(const HyperbolicTrajectory& hyp,
                                               const ParabolicTrajectory& par,
                                               const SpectralVector& theta0,
                                               const MuNuProfile* profile = nullptr);

struct MonotonicityCheck {
  std::size_t violations = 0;
  double worst_margin = 0.0;  ///< most negative slack-scaled margin observed
};

/// Verifies <c_eps A u_eps - c A u, rho> >= (c_eps + c)/2 |A^{1/2} rho|^2 at
/// every sample, within slack * scale. The inequality is algebraic, so any
/// violation beyond rounding indicates a solver defect.
[[nodiscard]] MonotonicityCheck check_monotonicity(const HyperbolicTrajectory& hyp,
                                                   const ParabolicTrajectory& par,
                                                   double slack = 1e-12);

struct TruncatedIntegral {
  double value = 0.0;  ///< trapezoidal integral up to the horizon
  double tail = 0.0;   ///< tail estimate from the fitted decay exponent
};

/// integral of (1+t) |r'|^2 over [0, horizon], with the tail beyond the
/// horizon estimated from the decay exponent fitted on the last decade.
[[nodiscard]] TruncatedIntegral weighted_dissipation_integral(
    const RemainderSeries& rem);

}  // namespace kirchlab
