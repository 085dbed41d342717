#pragma once

#include <span>
#include <vector>

#include "kirchlab/audit.hpp"

namespace kirchlab {

/// Two-mode caricature of the full equation:
///   w' = -mu (nu v^2 + mu w^2)^gamma w,   w(0) = 1,
///   v' = -nu (nu v^2 + mu w^2)^gamma v,   v(0) = eps,
/// together with the reduced unknown psi, related to the pair through
/// v = eps psi and w = psi^{1/delta}, delta = nu/mu.
struct ToyRun {
  double mu = 1.0;
  double nu = 1.0;
  double gamma = 1.0;
  double epsilon = 0.0;
  double delta = 1.0;  ///< nu/mu
  std::vector<double> times;
  std::vector<double> w, v;
  std::vector<double> psi;
};

/// Integrates the pair system and, independently, the scalar equation
///   psi' = -nu (nu eps^2 psi^2 + mu psi^{2/delta})^gamma psi,  psi(0) = 1,
/// so the substitution identity can be checked sample by sample. Requires
/// 0 < nu <= mu and gamma >= 1; eps = 0 is accepted and reproduces the
/// closed-form limit.
[[nodiscard]] ToyRun solve_toy(double mu, double nu, double gamma, double epsilon,
                               std::span<const double> sample_times,
                               double rel_tol = 1e-10);

/// Closed form of the eps = 0 scalar equation:
///   psi(t) = (1 + (2 gamma k / delta) t)^{-delta/(2 gamma)},  k = nu mu^gamma.
[[nodiscard]] double toy_psi_limit(double mu, double nu, double gamma, double t);

/// (delta / (4 K gamma t + delta))^{delta/(2 gamma)}, the explicit comparison
/// function that the rescaled solution dominates up to t = eps^{-delta}.
[[nodiscard]] double subsolution_z(double delta, double K, double gamma, double t);

/// Extremes of v(t) (1+t)^{delta/(2 gamma)} / eps over [t_lo, t_hi]; a
/// positive band certifies that the slow component really carries the
/// eps (1+t)^{-delta/(2 gamma)} profile.
struct ToyBand {
  double lo = 0.0;
  double hi = 0.0;
};
[[nodiscard]] ToyBand toy_remainder_band(const ToyRun& run, double t_lo, double t_hi);

/// For each ladder eps, integrates the equality case
///   psi' = -K psi (eps^{2 gamma} psi^{2 gamma} + psi^{2 gamma/delta}),
/// psi(0) = 1, up to t = eps^{-delta}, and reports the comparison with the
/// subsolution there, the rescaled endpoint value M28 = psi / eps^{delta^2 /
/// (2 gamma)} per ladder point, and the ladder stability of M28.
[[nodiscard]] AuditReport verify_lemma_3_2(double delta, double K, double gamma,
                                           std::span<const double> epsilon_ladder,
                                           double rel_tol = 1e-10);

}  // namespace kirchlab
