#include "kirchlab/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "kirchlab/errors.hpp"
#include "kirchlab/ode.hpp"

namespace kirchlab {
namespace {

void check_toy_parameters(double mu, double nu, double gamma) {
  if (!(nu > 0.0) || !(nu <= mu)) throw ConfigError("toy model requires 0 < nu <= mu");
  if (!(gamma >= 1.0)) throw ConfigError("toy model requires gamma >= 1");
}

std::string format_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", eps);
  return buf;
}

}  // namespace

ToyRun solve_toy(double mu, double nu, double gamma, double epsilon,
                 std::span<const double> sample_times, double rel_tol) {
  check_toy_parameters(mu, nu, gamma);
  if (epsilon < 0.0) throw ConfigError("toy model requires eps >= 0");

  ToyRun run;
  run.mu = mu;
  run.nu = nu;
  run.gamma = gamma;
  run.epsilon = epsilon;
  run.delta = nu / mu;
  run.times.assign(sample_times.begin(), sample_times.end());

  const std::size_t n = sample_times.size();
  run.w.resize(n);
  run.v.resize(n);
  run.psi.resize(n);

  ode::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-14;

  const auto pair_rhs = [&](double, std::span<const double> y, std::span<double> f) {
    const double q = std::pow(nu * y[1] * y[1] + mu * y[0] * y[0], gamma);
    f[0] = -mu * q * y[0];
    f[1] = -nu * q * y[1];
  };
  const double y0[2] = {1.0, epsilon};
  integrate_dopri5(pair_rhs, y0, sample_times, opt,
                   [&](std::size_t i, double, std::span<const double> y, double) {
                     run.w[i] = y[0];
                     run.v[i] = y[1];
                   });

  const double inv_delta = mu / nu;
  const double eps_sq = epsilon * epsilon;
  const auto psi_rhs = [&](double, std::span<const double> y, std::span<double> f) {
    const double p = y[0];
    f[0] = -nu * std::pow(nu * eps_sq * p * p + mu * std::pow(p * p, inv_delta), gamma) * p;
  };
  const double p0[1] = {1.0};
  integrate_dopri5(psi_rhs, p0, sample_times, opt,
                   [&](std::size_t i, double, std::span<const double> y, double) {
                     run.psi[i] = y[0];
                   });
  return run;
}

double toy_psi_limit(double mu, double nu, double gamma, double t) {
  check_toy_parameters(mu, nu, gamma);
  const double delta = nu / mu;
  const double k = nu * std::pow(mu, gamma);
  return std::pow(1.0 + (2.0 * gamma * k / delta) * t, -delta / (2.0 * gamma));
}

double subsolution_z(double delta, double K, double gamma, double t) {
  if (!(delta > 0.0) || !(delta <= 1.0)) throw ConfigError("subsolution requires 0 < delta <= 1");
  if (!(K > 0.0)) throw ConfigError("subsolution requires K > 0");
  return std::pow(delta / (4.0 * K * gamma * t + delta), delta / (2.0 * gamma));
}

ToyBand toy_remainder_band(const ToyRun& run, double t_lo, double t_hi) {
  if (!(run.epsilon > 0.0)) throw ConfigError("remainder band needs eps > 0");
  ToyBand band{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  bool seen = false;
  const double p = run.delta / (2.0 * run.gamma);
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const double t = run.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double value = run.v[i] * std::pow(1.0 + t, p) / run.epsilon;
    band.lo = std::min(band.lo, value);
    band.hi = std::max(band.hi, value);
    seen = true;
  }
  if (!seen) throw GridError("remainder band window contains no samples");
  return band;
}

AuditReport verify_lemma_3_2(double delta, double K, double gamma,
                             std::span<const double> epsilon_ladder,
                             double rel_tol) {
  if (!(delta > 0.0) || !(delta <= 1.0)) throw ConfigError("lemma check requires 0 < delta <= 1");
  if (!(K > 0.0)) throw ConfigError("lemma check requires K > 0");
  if (!(gamma >= 1.0)) throw ConfigError("lemma check requires gamma >= 1");

  AuditReport rep;
  rep.title = "lemma_3_2";
  rep.meta.gamma = gamma;
  rep.meta.delta = delta;

  double m_lo = std::numeric_limits<double>::infinity();
  double m_hi = 0.0;
  for (const double eps : epsilon_ladder) {
    if (!(eps > 0.0)) throw ConfigError("lemma ladder requires eps > 0");
    const double t_star = std::pow(eps, -delta);

    ode::Options opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-14;
    const double eps2g = std::pow(eps, 2.0 * gamma);
    const auto rhs = [&](double, std::span<const double> y, std::span<double> f) {
      const double p = y[0];
      f[0] = -K * p * (eps2g * std::pow(p, 2.0 * gamma) + std::pow(p, 2.0 * gamma / delta));
    };
    const double y0[1] = {1.0};
    const double grid[2] = {0.0, t_star};
    double psi_end = 1.0;
    integrate_dopri5(rhs, y0, grid, opt,
                     [&](std::size_t i, double, std::span<const double> y, double) {
                       if (i == 1) psi_end = y[0];
                     });

    const double z_end = subsolution_z(delta, K, gamma, t_star);
    const double margin = psi_end - z_end;
    rep.entries.push_back(AuditEntry{
        "psi vs z, eps=" + format_eps(eps), "Lemma 3.2", margin,
        Window{t_star, t_star}, margin >= -10.0 * rel_tol ? "pass" : "fail"});

    const double m28 = psi_end / std::pow(eps, delta * delta / (2.0 * gamma));
    rep.entries.push_back(AuditEntry{"M28, eps=" + format_eps(eps), "Lemma 3.2",
                                     m28, Window{t_star, t_star}, "info"});
    m_lo = std::min(m_lo, m28);
    m_hi = std::max(m_hi, m28);
  }

  if (!epsilon_ladder.empty()) {
    const double ratio = m_lo > 0.0 ? m_hi / m_lo : std::numeric_limits<double>::infinity();
    rep.entries.push_back(AuditEntry{"M28 stability", "Lemma 3.2", ratio, Window{},
                                     ratio <= 3.0 ? "pass" : "fail"});
  }
  return rep;
}

}  // namespace kirchlab
