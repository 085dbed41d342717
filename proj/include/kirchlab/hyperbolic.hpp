#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kirchlab/ode.hpp"
#include "kirchlab/spectral.hpp"

namespace kirchlab {

/// Sampled solution of eps u'' + u' + |A^{1/2}u|^{2 gamma} A u = 0.
struct HyperbolicTrajectory {
  SpectralOperator op;
  double gamma = 1.0;
  double epsilon = 0.0;
  std::vector<double> times;
  std::vector<SpectralVector> u;
  std::vector<SpectralVector> u_prime;
  std::vector<double> c;       ///< c_eps(t) = |A^{1/2}u_eps(t)|^{2 gamma}
  std::vector<double> C;       ///< C_eps(t), accumulated at integrator order
  std::vector<double> energy;  ///< eps|u'|^2 + s^{gamma+1}/(gamma+1)
  ode::Stats stats;
  std::size_t layer_steps = 0;  ///< accepted steps with t <= 5 eps
};

struct HyperbolicOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  /// Largest admissible eps; beyond it the damping no longer dominates and
  /// the decay theory gives no guidance.
  double eps_max = 0.5;
  /// Time after which |A^{1/2}u| must have dropped below its initial value.
  double blowup_horizon = 1e3;
  /// Relative energy growth treated as blow-up.
  double energy_growth_tol = 1e-6;
};

/// Integrates the damped system as a first-order problem in (u, u') with an
/// L-stable implicit method, so steps may grow far beyond eps once the
/// initial layer has decayed. The step size starts at eps/10 and is capped at
/// eps/4 until t = 5 eps. Throws BlowUpError when energy grows beyond
/// tolerance or the weighted norm fails to decay, and ConfigError when eps is
/// outside (0, eps_max].
[[nodiscard]] HyperbolicTrajectory solve_hyperbolic(
    const SpectralOperator& op, const InitialData& data, double epsilon,
    std::span<const double> sample_times, double rel_tol);

[[nodiscard]] HyperbolicTrajectory solve_hyperbolic(
    const SpectralOperator& op, const InitialData& data, double epsilon,
    std::span<const double> sample_times, const HyperbolicOptions& options);

/// eps |u'|^2 + |A^{1/2}u|^{2(gamma+1)} / (gamma+1); decays along solutions
/// with d/dt energy = -2|u'|^2.
[[nodiscard]] double energy(const SpectralOperator& op, double gamma, double epsilon,
                            const SpectralVector& u, const SpectralVector& u_prime);

/// Scalar projections of u and u' onto the directions v0/|v0| and v1/|v1|.
struct ComponentSeries {
  std::vector<double> times;
  std::vector<double> u_mu, u_mu_prime;
  std::vector<double> u_nu, u_nu_prime;  ///< empty when the profile has no nu
};

/// Projects a trajectory onto the profile's extremal-frequency directions.
/// Requesting the nu component of a profile without nu raises RegimeError.
[[nodiscard]] ComponentSeries components(const HyperbolicTrajectory& traj,
                                         const MuNuProfile& profile);

}  // namespace kirchlab
