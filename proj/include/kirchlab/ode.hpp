#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace kirchlab::ode {

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  double h_init = 0.0;  ///< <= 0 picks a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  double max_growth = 2.0;  ///< step growth bound per accepted step
  double safety = 0.9;
  int max_newton_iters = 10;  ///< implicit driver only
  /// Optional hard cap on the step size as a function of the current time.
  /// Used to force resolution inside an initial layer.
  std::function<double(double)> step_cap;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  std::size_t jacobian_evals = 0;
};

using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;
/// Fills a dense row-major n*n Jacobian of the right-hand side.
using Jacobian = std::function<void(double, std::span<const double>, std::span<double>)>;
/// Called at every sample time with (index, t, state, quadrature value).
using SampleFn =
    std::function<void(std::size_t, double, std::span<const double>, double)>;
/// Scalar integrand accumulated along the solution with the method's own
/// quadrature weights, so it carries the integrator's order of accuracy.
using QuadFn = std::function<double(double, std::span<const double>)>;
/// Called after every accepted step (not only at samples).
using AcceptFn = std::function<void(double, std::span<const double>)>;

/// Dormand-Prince 5(4) with PI step control. Steps are clipped so that every
/// entry of sample_times is hit exactly; sample_times must be strictly
/// increasing and the integration starts at sample_times[0].
Stats integrate_dopri5(const Rhs& rhs, std::span<const double> y0,
                       std::span<const double> sample_times, const Options& opt,
                       const SampleFn& on_sample, const QuadFn& quad = {},
                       const AcceptFn& on_accept = {});

/// Five-stage singly-diagonally-implicit method of order 4 with an embedded
/// order-3 error estimate. L-stable and stiffly accurate, so fast transients
/// can be stepped over once they have decayed. Stage equations are solved by
/// a modified Newton iteration with the supplied Jacobian; the nonlinear
/// right-hand side is always evaluated at the current stage iterate.
Stats integrate_sdirk4(const Rhs& rhs, const Jacobian& jac,
                       std::span<const double> y0,
                       std::span<const double> sample_times, const Options& opt,
                       const SampleFn& on_sample, const QuadFn& quad = {},
                       const AcceptFn& on_accept = {});

}  // namespace kirchlab::ode
