#include "kirchlab/remainder.hpp"

#include <cmath>

#include "kirchlab/errors.hpp"
#include "kirchlab/numeric.hpp"
#include "kirchlab/ode.hpp"

namespace kirchlab {

CorrectorValue corrector(const SpectralVector& theta0, double epsilon, double t) {
  if (!(epsilon > 0.0)) throw ConfigError("corrector: epsilon must be positive");
  if (t < 0.0) throw Error("corrector: negative time");
  const double shape = -std::expm1(-t / epsilon);  // 1 - e^{-t/eps}, stable for t >> eps
  CorrectorValue out;
  out.value = scaled(theta0, epsilon * shape);
  out.derivative = scaled(theta0, std::exp(-t / epsilon));
  return out;
}

CorrectorSeries corrector_oracle(const SpectralVector& theta0, double epsilon,
                                 std::span<const double> sample_times,
                                 double rel_tol) {
  if (!(epsilon > 0.0)) throw ConfigError("corrector_oracle: epsilon must be positive");

  // One scalar kernel w(0) = 0, w'(0) = 1 serves every mode by linearity.
  ode::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-16;
  opt.h_init = epsilon / 10.0;
  opt.step_cap = [epsilon](double t) {
    return t < 5.0 * epsilon ? epsilon / 4.0 : std::numeric_limits<double>::infinity();
  };

  CorrectorSeries out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.value.reserve(sample_times.size());
  out.derivative.reserve(sample_times.size());

  const double inv_eps = 1.0 / epsilon;
  const double y0[2] = {0.0, 1.0};
  ode::integrate_sdirk4(
      [inv_eps](double, std::span<const double> y, std::span<double> f) {
        f[0] = y[1];
        f[1] = -y[1] * inv_eps;
      },
      [inv_eps](double, std::span<const double>, std::span<double> J) {
        J[0] = 0.0;
        J[1] = 1.0;
        J[2] = 0.0;
        J[3] = -inv_eps;
      },
      y0, sample_times, opt,
      [&](std::size_t, double, std::span<const double> y, double) {
        out.value.push_back(scaled(theta0, y[0]));
        out.derivative.push_back(scaled(theta0, y[1]));
      });
  return out;
}

RemainderSeries build_remainders(const HyperbolicTrajectory& hyp,
                                 const ParabolicTrajectory& par,
                                 const SpectralVector& theta0,
                                 const MuNuProfile* profile) {
  if (!(hyp.op == par.op)) {
    throw GridError("build_remainders: trajectories use different operators");
  }
  if (hyp.gamma != par.gamma) {
    throw GridError("build_remainders: trajectories use different gamma");
  }
  if (hyp.times.size() != par.times.size()) {
    throw GridError("build_remainders: trajectories use different grids");
  }
  for (std::size_t i = 0; i < hyp.times.size(); ++i) {
    if (hyp.times[i] != par.times[i]) {
      throw GridError("build_remainders: grids differ at sample " + std::to_string(i));
    }
  }

  RemainderSeries rem;
  rem.epsilon = hyp.epsilon;
  rem.gamma = hyp.gamma;
  if (profile && profile->delta) rem.delta = *profile->delta;
  rem.times = hyp.times;

  const std::size_t m = hyp.times.size();
  rem.rho.reserve(m);
  rem.r_prime.reserve(m);
  rem.rho_sq.reserve(m);
  rem.rho_half_sq.reserve(m);
  rem.rho_full_sq.reserve(m);
  rem.rho_prime_sq.reserve(m);
  rem.r_prime_sq.reserve(m);
  rem.r_prime_half_sq.reserve(m);

  const SpectralOperator& op = hyp.op;
  for (std::size_t i = 0; i < m; ++i) {
    SpectralVector rho = sub(hyp.u[i], par.u[i]);
    const SpectralVector u_prime_lim = derivatives(par, i).u_prime;
    SpectralVector rho_prime = sub(hyp.u_prime[i], u_prime_lim);
    const CorrectorValue theta = corrector(theta0, hyp.epsilon, hyp.times[i]);
    SpectralVector r_prime = sub(rho_prime, theta.derivative);

    rem.rho_sq.push_back(dot(rho, rho));
    rem.rho_half_sq.push_back(weighted_norm_sq(op, 0.5, rho));
    rem.rho_full_sq.push_back(weighted_norm_sq(op, 1.0, rho));
    rem.rho_prime_sq.push_back(dot(rho_prime, rho_prime));
    rem.r_prime_sq.push_back(dot(r_prime, r_prime));
    rem.r_prime_half_sq.push_back(weighted_norm_sq(op, 0.5, r_prime));
    rem.rho.push_back(std::move(rho));
    rem.r_prime.push_back(std::move(r_prime));
  }
  return rem;
}

MonotonicityCheck check_monotonicity(const HyperbolicTrajectory& hyp,
                                     const ParabolicTrajectory& par,
                                     double slack) {
  if (hyp.times != par.times) {
    throw GridError("check_monotonicity: trajectories use different grids");
  }
  const SpectralOperator& op = hyp.op;
  const double gamma = hyp.gamma;

  MonotonicityCheck out;
  for (std::size_t i = 0; i < hyp.times.size(); ++i) {
    const SpectralVector& ue = hyp.u[i];
    const SpectralVector& up = par.u[i];
    const double ce = nonlinear_coefficient(weighted_norm_sq(op, 0.5, ue), gamma);
    const double cp = nonlinear_coefficient(weighted_norm_sq(op, 0.5, up), gamma);
    const SpectralVector rho = sub(ue, up);
    const SpectralVector aue = apply_power(op, 1.0, ue);
    const SpectralVector aup = apply_power(op, 1.0, up);

    const double lhs = dot(sub(scaled(aue, ce), scaled(aup, cp)), rho);
    const double rhs = 0.5 * (ce + cp) * weighted_norm_sq(op, 0.5, rho);
    const double scale = std::abs(ce * dot(aue, rho)) + std::abs(cp * dot(aup, rho)) +
                         rhs + 1e-300;
    const double margin = (lhs - rhs) / scale;
    if (margin < out.worst_margin) out.worst_margin = margin;
    if (lhs - rhs < -slack * scale) ++out.violations;
  }
  return out;
}

TruncatedIntegral weighted_dissipation_integral(const RemainderSeries& rem) {
  const std::size_t m = rem.times.size();
  std::vector<double> integrand(m);
  for (std::size_t i = 0; i < m; ++i) {
    integrand[i] = (1.0 + rem.times[i]) * rem.r_prime_sq[i];
  }
  TruncatedIntegral out;
  const auto running = cumulative_trapezoid(rem.times, integrand);
  out.value = running.empty() ? 0.0 : running.back();

  // Tail estimate: fit the decay exponent of the integrand over the last
  // decade and integrate the fitted power law beyond the horizon.
  const double horizon = rem.times.back();
  if (integrand.back() <= 0.0) {
    out.tail = 0.0;
    return out;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < m; ++i) {
    if (rem.times[i] >= horizon / 10.0 && integrand[i] > 0.0) {
      lx.push_back(std::log1p(rem.times[i]));
      ly.push_back(std::log(integrand[i]));
    }
  }
  if (lx.size() < 5) {
    out.tail = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const LinearFit fit = linear_fit(lx, ly);
  out.tail = fit.slope < -1.0
                 ? integrand.back() * (1.0 + horizon) / (-1.0 - fit.slope)
                 : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace kirchlab
