#include "kirchlab/parabolic.hpp"

#include <cmath>

#include "kirchlab/errors.hpp"
#include "kirchlab/numeric.hpp"

namespace kirchlab {

namespace {

void check_data(const SpectralOperator& op, const InitialData& data) {
  if (op.size() != data.u0.size()) {
    throw DimensionError("parabolic solver: operator/data size mismatch");
  }
}

}  // namespace

ParabolicTrajectory solve_profile(const SpectralOperator& op, const InitialData& data,
                                  std::span<const double> sample_times,
                                  double rel_tol) {
  check_data(op, data);
  const std::size_t n = op.size();

  // s(C) = |A^{1/2} u(C)|^2 with u_k(C) = u0_k e^{-lambda_k^2 C}.
  const auto s_of = [&](double C) {
    CompensatedSum sum;
    for (std::size_t k = 0; k < n; ++k) {
      const double ev = op.eigenvalue(k);
      if (ev == 0.0) continue;
      const double uk = data.u0[k] * std::exp(-ev * C);
      sum.add(ev * uk * uk);
    }
    return sum.value();
  };

  ode::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-14;

  ParabolicTrajectory traj{op, data.gamma, {}, {}, {}, {}, {}};
  traj.times.assign(sample_times.begin(), sample_times.end());
  traj.u.reserve(sample_times.size());
  traj.c.reserve(sample_times.size());
  traj.C.reserve(sample_times.size());

  const double y0[1] = {0.0};
  traj.stats = ode::integrate_dopri5(
      [&](double, std::span<const double> y, std::span<double> f) {
        f[0] = nonlinear_coefficient(s_of(y[0]), data.gamma);
      },
      y0, sample_times, opt,
      [&](std::size_t, double, std::span<const double> y, double) {
        const double C = y[0];
        SpectralVector u(std::vector<double>(n, 0.0));
        for (std::size_t k = 0; k < n; ++k) {
          u[k] = data.u0[k] * std::exp(-op.eigenvalue(k) * C);
        }
        traj.u.push_back(std::move(u));
        traj.c.push_back(nonlinear_coefficient(s_of(C), data.gamma));
        traj.C.push_back(C);
      });
  return traj;
}

ParabolicTrajectory solve_direct(const SpectralOperator& op, const InitialData& data,
                                 std::span<const double> sample_times,
                                 double rel_tol) {
  check_data(op, data);
  const std::size_t n = op.size();

  const auto coeff_of = [&](std::span<const double> u) {
    CompensatedSum sum;
    for (std::size_t k = 0; k < n; ++k) {
      sum.add(op.eigenvalue(k) * u[k] * u[k]);
    }
    return nonlinear_coefficient(sum.value(), data.gamma);
  };

  ode::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-14;

  ParabolicTrajectory traj{op, data.gamma, {}, {}, {}, {}, {}};
  traj.times.assign(sample_times.begin(), sample_times.end());

  traj.stats = ode::integrate_dopri5(
      [&](double, std::span<const double> y, std::span<double> f) {
        const double c = coeff_of(y);
        for (std::size_t k = 0; k < n; ++k) f[k] = -c * op.eigenvalue(k) * y[k];
      },
      data.u0.coeffs, sample_times, opt,
      [&](std::size_t, double, std::span<const double> y, double quad) {
        traj.u.emplace_back(std::vector<double>(y.begin(), y.end()));
        traj.c.push_back(coeff_of(y));
        traj.C.push_back(quad);
      },
      // C accumulated with the integrator's own quadrature weights.
      [&](double, std::span<const double> y) { return coeff_of(y); });
  return traj;
}

ParabolicDerivatives derivatives(const ParabolicTrajectory& traj, std::size_t index) {
  if (index >= traj.u.size()) {
    throw DimensionError("derivatives: sample index out of range");
  }
  const SpectralVector& u = traj.u[index];
  const SpectralOperator& op = traj.op;
  const double gamma = traj.gamma;

  const double s = weighted_norm_sq(op, 0.5, u);
  const double c = nonlinear_coefficient(s, gamma);
  const SpectralVector au = apply_power(op, 1.0, u);
  const double au_sq = dot(au, au);
  const double c_prime =
      s > 1e-300 ? -2.0 * gamma * std::pow(s, 2.0 * gamma - 1.0) * au_sq : 0.0;

  ParabolicDerivatives out;
  out.u_prime = scaled(au, -c);
  out.u_second = add(scaled(au, -c_prime), scaled(apply_power(op, 2.0, u), c * c));
  return out;
}

}  // namespace kirchlab
