#include "kirchlab/hyperbolic.hpp"

#include <cmath>
#include <string>

#include "kirchlab/errors.hpp"
#include "kirchlab/numeric.hpp"

namespace kirchlab {

namespace {

// State layout: y = [u_0 .. u_{N-1}, v_0 .. v_{N-1}] with v = u'.
double state_s(const SpectralOperator& op, std::span<const double> y) {
  CompensatedSum sum;
  for (std::size_t k = 0; k < op.size(); ++k) {
    sum.add(op.eigenvalue(k) * y[k] * y[k]);
  }
  return sum.value();
}

}  // namespace

double energy(const SpectralOperator& op, double gamma, double epsilon,
              const SpectralVector& u, const SpectralVector& u_prime) {
  const double s = weighted_norm_sq(op, 0.5, u);
  const double vsq = dot(u_prime, u_prime);
  return epsilon * vsq + std::pow(s, gamma + 1.0) / (gamma + 1.0);
}

HyperbolicTrajectory solve_hyperbolic(const SpectralOperator& op,
                                      const InitialData& data, double epsilon,
                                      std::span<const double> sample_times,
                                      double rel_tol) {
  HyperbolicOptions options;
  options.rel_tol = rel_tol;
  return solve_hyperbolic(op, data, epsilon, sample_times, options);
}

HyperbolicTrajectory solve_hyperbolic(const SpectralOperator& op,
                                      const InitialData& data, double epsilon,
                                      std::span<const double> sample_times,
                                      const HyperbolicOptions& options) {
  if (op.size() != data.u0.size()) {
    throw DimensionError("hyperbolic solver: operator/data size mismatch");
  }
  if (!(epsilon > 0.0) || epsilon > options.eps_max) {
    throw ConfigError("epsilon must lie in (0, " + std::to_string(options.eps_max) +
                      "], got " + std::to_string(epsilon));
  }

  const std::size_t n = op.size();
  const double gamma = data.gamma;
  const double eps = epsilon;

  const auto rhs = [&](double, std::span<const double> y, std::span<double> f) {
    const double c = nonlinear_coefficient(state_s(op, y), gamma);
    for (std::size_t k = 0; k < n; ++k) {
      const double v = y[n + k];
      f[k] = v;
      f[n + k] = -(v + c * op.eigenvalue(k) * y[k]) / eps;
    }
    // A negative coefficient is impossible for s >= 0; guard kept as a bug trap.
    if (c < 0.0) throw Error("negative nonlinear coefficient");
  };

  // d(-(v + c(u) A u)/eps)/du = -(c A + 2 gamma s^{gamma-1} (A u)(A u)^T)/eps.
  const auto jac = [&](double, std::span<const double> y, std::span<double> J) {
    const std::size_t dim = 2 * n;
    std::fill(J.begin(), J.end(), 0.0);
    const double s = state_s(op, y);
    const double c = nonlinear_coefficient(s, gamma);
    const double dgain = s > 1e-300 ? 2.0 * gamma * std::pow(s, gamma - 1.0) : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      J[k * dim + (n + k)] = 1.0;  // du_k/dt = v_k
      const double au_k = op.eigenvalue(k) * y[k];
      for (std::size_t j = 0; j < n; ++j) {
        const double au_j = op.eigenvalue(j) * y[j];
        double block = dgain * au_k * au_j;
        if (j == k) block += c * op.eigenvalue(k);
        J[(n + k) * dim + j] = -block / eps;
      }
      J[(n + k) * dim + (n + k)] = -1.0 / eps;
    }
  };

  HyperbolicTrajectory traj{op,  gamma, epsilon, {}, {}, {}, {}, {}, {}, {}, 0};
  traj.times.assign(sample_times.begin(), sample_times.end());
  traj.u.reserve(sample_times.size());
  traj.u_prime.reserve(sample_times.size());

  std::vector<double> y0(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    y0[k] = data.u0[k];
    y0[n + k] = data.u1[k];
  }

  const double s0 = state_s(op, y0);
  const double e0 = energy(op, gamma, eps, data.u0, data.u1);
  const double energy_cap = e0 * (1.0 + options.energy_growth_tol) + 1e-300;

  ode::Options opt;
  opt.rel_tol = options.rel_tol;
  opt.abs_tol = options.abs_tol;
  opt.h_init = eps / 10.0;
  // Resolve the initial layer: never stride past eps/4 before t = 5 eps.
  opt.step_cap = [eps](double t) {
    return t < 5.0 * eps ? eps / 4.0 : std::numeric_limits<double>::infinity();
  };

  const auto energy_of = [&](std::span<const double> y) {
    CompensatedSum vsq;
    for (std::size_t k = 0; k < n; ++k) vsq.add(y[n + k] * y[n + k]);
    return eps * vsq.value() +
           std::pow(state_s(op, y), gamma + 1.0) / (gamma + 1.0);
  };

  traj.stats = ode::integrate_sdirk4(
      rhs, jac, y0, sample_times, opt,
      [&](std::size_t, double t, std::span<const double> y, double quad) {
        SpectralVector u(std::vector<double>(y.begin(), y.begin() + n));
        SpectralVector v(std::vector<double>(y.begin() + n, y.end()));
        traj.c.push_back(nonlinear_coefficient(state_s(op, y), gamma));
        traj.C.push_back(quad);
        traj.energy.push_back(energy_of(y));
        traj.u.push_back(std::move(u));
        traj.u_prime.push_back(std::move(v));
        if (s0 > 0.0 && t >= options.blowup_horizon && state_s(op, y) >= s0) {
          throw BlowUpError("|A^{1/2}u| failed to decay by t = " + std::to_string(t));
        }
      },
      [&](double, std::span<const double> y) {
        return nonlinear_coefficient(state_s(op, y), gamma);
      },
      [&](double t, std::span<const double> y) {
        if (t <= 5.0 * eps) ++traj.layer_steps;
        if (energy_of(y) > energy_cap) {
          throw BlowUpError("energy grew beyond tolerance at t = " +
                            std::to_string(t));
        }
      });
  return traj;
}

ComponentSeries components(const HyperbolicTrajectory& traj,
                           const MuNuProfile& profile) {
  ComponentSeries out;
  out.times = traj.times;
  const double n0 = std::sqrt(dot(profile.v0, profile.v0));
  if (n0 == 0.0) throw RegimeError("profile has an empty mu component");
  const bool has_nu = profile.nu.has_value();
  const double n1 = has_nu ? std::sqrt(dot(profile.v1, profile.v1)) : 0.0;
  if (has_nu && n1 == 0.0) throw RegimeError("profile has nu but an empty v1");

  out.u_mu.reserve(traj.u.size());
  out.u_mu_prime.reserve(traj.u.size());
  for (std::size_t i = 0; i < traj.u.size(); ++i) {
    out.u_mu.push_back(dot(traj.u[i], profile.v0) / n0);
    out.u_mu_prime.push_back(dot(traj.u_prime[i], profile.v0) / n0);
    if (has_nu) {
      out.u_nu.push_back(dot(traj.u[i], profile.v1) / n1);
      out.u_nu_prime.push_back(dot(traj.u_prime[i], profile.v1) / n1);
    }
  }
  return out;
}

}  // namespace kirchlab
