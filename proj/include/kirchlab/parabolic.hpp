#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kirchlab/ode.hpp"
#include "kirchlab/spectral.hpp"

namespace kirchlab {

/// Sampled solution of u' + |A^{1/2}u|^{2 gamma} A u = 0.
struct ParabolicTrajectory {
  SpectralOperator op;
  double gamma = 1.0;
  std::vector<double> times;
  std::vector<SpectralVector> u;
  std::vector<double> c;        ///< c(t) = |A^{1/2}u(t)|^{2 gamma}
  std::vector<double> C;        ///< C(t) = integral of c from 0 to t
  ode::Stats stats;
};

/// Profile reduction: integrates the scalar equation
///   C' = (sum_k lambda_k^2 u0_k^2 exp(-2 lambda_k^2 C))^gamma,  C(0) = 0,
/// then reconstructs u_k(t) = u0_k exp(-lambda_k^2 C(t)) mode by mode, so the
/// scalar solve is the only source of numerical error.
[[nodiscard]] ParabolicTrajectory solve_profile(const SpectralOperator& op,
                                                const InitialData& data,
                                                std::span<const double> sample_times,
                                                double rel_tol = 1e-10);

/// Cross-check oracle: integrates the full N-dimensional system
/// u_k' = -c(u) lambda_k^2 u_k directly.
[[nodiscard]] ParabolicTrajectory solve_direct(const SpectralOperator& op,
                                               const InitialData& data,
                                               std::span<const double> sample_times,
                                               double rel_tol = 1e-10);

struct ParabolicDerivatives {
  SpectralVector u_prime;
  SpectralVector u_second;
};

/// Closed-form derivatives at sample `index`:
///   u'  = -c A u
///   u'' = -c' A u + c^2 A^2 u,  c' = -2 gamma s^{2 gamma - 1} |A u|^2,
/// with s = |A^{1/2}u|^2 evaluated from the stored state.
[[nodiscard]] ParabolicDerivatives derivatives(const ParabolicTrajectory& traj,
                                               std::size_t index);

}  // namespace kirchlab
