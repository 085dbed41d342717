#include "kirchlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "kirchlab/errors.hpp"
#include "kirchlab/grid.hpp"
#include "kirchlab/numeric.hpp"

namespace kirchlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string finite_verdict(double c) { return std::isfinite(c) ? "pass" : "fail"; }

/// sup over the window of (1+t)^power * series / scale.
AuditEntry sup_entry(std::string name, std::string ref, std::span<const double> times,
                     std::span<const double> series, double power, double scale = 1.0,
                     Window window = {}) {
  double best = -kInf;
  bool seen = false;
  bool bad = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!window.contains(times[i])) continue;
    seen = true;
    const double v = std::pow(1.0 + times[i], power) * series[i] / scale;
    if (!std::isfinite(v)) bad = true;
    best = std::max(best, v);
  }
  AuditEntry e{std::move(name), std::move(ref), best, window,
               (seen && !bad) ? finite_verdict(best) : "fail"};
  return e;
}

/// inf over the window, passing only when it stays above the floor.
AuditEntry inf_entry(std::string name, std::string ref, std::span<const double> times,
                     std::span<const double> series, double power, double floor,
                     Window window = {}) {
  double worst = kInf;
  bool seen = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!window.contains(times[i])) continue;
    seen = true;
    worst = std::min(worst, std::pow(1.0 + times[i], power) * series[i]);
  }
  AuditEntry e{std::move(name), std::move(ref), worst, window,
               (seen && std::isfinite(worst) && worst > floor) ? "pass" : "fail"};
  return e;
}

/// sup over samples of cumtrapz(integrand)(t) / (scale * (1+t)^ratio_power).
/// The integrand must already carry its weight.
AuditEntry integral_entry(std::string name, std::string ref,
                          std::span<const double> times,
                          const std::vector<double>& integrand, double ratio_power,
                          double scale = 1.0) {
  const auto cum = cumulative_trapezoid(times, integrand);
  double best = 0.0;
  bool bad = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double v = cum[i] / (scale * std::pow(1.0 + times[i], ratio_power));
    if (!std::isfinite(v)) bad = true;
    best = std::max(best, v);
  }
  AuditEntry e{std::move(name), std::move(ref), best,
               Window{times.front(), times.back()},
               bad ? "fail" : finite_verdict(best)};
  return e;
}

void require_shared_grid(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw GridError("audit requires a shared sample grid");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) throw GridError("audit requires a shared sample grid");
  }
}

}  // namespace

RateFit fit_rate(std::span<const double> times, std::span<const double> values,
                 Window window) {
  if (times.size() != values.size()) {
    throw DimensionError("fit_rate: times and values differ in length");
  }
  std::vector<double> x, y;
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!window.contains(times[i])) continue;
    if (!(values[i] > 0.0)) {
      throw Error("fit_rate: nonpositive value inside the fit window");
    }
    x.push_back(std::log1p(times[i]));
    y.push_back(std::log(values[i]));
    lo = std::min(lo, times[i]);
    hi = std::max(hi, times[i]);
  }
  if (x.size() < 5) throw Error("fit_rate: fewer than five samples in the window");
  const LinearFit f = linear_fit(x, y);
  return RateFit{f.slope, f.intercept, f.rms_residual, Window{lo, hi}};
}

AuditReport audit_theorem_A(const ParabolicTrajectory& par,
                            const HyperbolicTrajectory& hyp,
                            const RemainderSeries& rem, double delta,
                            const AuditOptions& opt) {
  require_shared_grid(par.times, hyp.times);
  require_shared_grid(par.times, rem.times);
  const double g = par.gamma;
  const double inv_g = 1.0 / g;
  const std::size_t n = par.times.size();

  std::vector<double> s_par(n), au_par(n), a32_par(n), usec(n), usec_half(n);
  for (std::size_t i = 0; i < n; ++i) {
    s_par[i] = weighted_norm_sq(par.op, 0.5, par.u[i]);
    au_par[i] = weighted_norm_sq(par.op, 1.0, par.u[i]);
    a32_par[i] = weighted_norm_sq(par.op, 1.5, par.u[i]);
    const auto d = derivatives(par, i);
    usec[i] = weighted_norm_sq(par.op, 0.0, d.u_second);
    usec_half[i] = weighted_norm_sq(par.op, 0.5, d.u_second);
  }
  // (3.15)/(3.16) integrands carry the weight; (3.17) reuses the bare series.
  std::vector<double> usec_weighted(n), usec_half_weighted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::pow(1.0 + par.times[i], 1.0 + 2.0 * delta * inv_g);
    usec_weighted[i] = w * usec[i];
    usec_half_weighted[i] = w * usec_half[i];
  }

  std::vector<double> s_hyp(n), au_hyp(n), v_hyp(n), logder(n);
  for (std::size_t i = 0; i < n; ++i) {
    s_hyp[i] = weighted_norm_sq(hyp.op, 0.5, hyp.u[i]);
    au_hyp[i] = weighted_norm_sq(hyp.op, 1.0, hyp.u[i]);
    v_hyp[i] = weighted_norm_sq(hyp.op, 0.0, hyp.u_prime[i]);
    const double s = s_hyp[i];
    if (hyp.c[i] > 0.0 && s > 0.0) {
      const double cp = 2.0 * g * std::pow(s, g - 1.0) *
                        dot(apply_power(hyp.op, 1.0, hyp.u[i]), hyp.u_prime[i]);
      logder[i] = std::abs(cp) / hyp.c[i];
    } else {
      logder[i] = 0.0;
    }
  }

  AuditReport rep;
  rep.title = "theorem_a";
  rep.meta.epsilon = hyp.epsilon;
  rep.meta.gamma = g;
  rep.meta.eigenvalues.assign(par.op.eigenvalues().begin(), par.op.eigenvalues().end());
  rep.meta.lower_floor = opt.lower_floor;
  rep.meta.monotonicity_slack = opt.monotonicity_slack;

  const auto& tp = par.times;
  const auto& th = hyp.times;
  rep.entries.push_back(sup_entry("(3.11)", "Theorem A", tp, s_par, inv_g));
  rep.entries.push_back(sup_entry("(3.12)", "Theorem A", tp, au_par, inv_g));
  rep.entries.push_back(sup_entry("(3.13)", "Theorem A", tp, par.c, 1.0));
  rep.entries.push_back(sup_entry("(3.14)", "Theorem A", tp, a32_par, inv_g));
  rep.entries.push_back(
      integral_entry("(3.15)", "Theorem A", tp, usec_weighted, delta * inv_g));
  rep.entries.push_back(
      integral_entry("(3.16)", "Theorem A", tp, usec_half_weighted, delta * inv_g));
  rep.entries.push_back(sup_entry("(3.17)", "Theorem A", tp, usec, 4.0 + inv_g));

  rep.entries.push_back(sup_entry("(3.18) upper", "Theorem A", th, s_hyp, inv_g));
  rep.entries.push_back(inf_entry("(3.18) lower", "Theorem A", th, s_hyp, inv_g,
                                  opt.lower_floor, opt.band_window));
  rep.entries.push_back(sup_entry("(3.19)", "Theorem A", th, au_hyp, inv_g));
  // The layer contributes |u1|^2 at t ~ eps; the decay claim starts past it.
  rep.entries.push_back(sup_entry("(3.20)", "Theorem A", th, v_hyp, 2.0 + inv_g, 1.0,
                                  Window{10.0 * hyp.epsilon, kInf}));
  rep.entries.push_back(sup_entry("(3.21) upper", "Theorem A", th, hyp.c, 1.0));
  rep.entries.push_back(inf_entry("(3.21) lower", "Theorem A", th, hyp.c, 1.0,
                                  opt.lower_floor, opt.band_window));
  rep.entries.push_back(sup_entry("(3.22)", "Theorem A", th, logder, 1.0));

  const double eps2 = hyp.epsilon * hyp.epsilon;
  rep.entries.push_back(sup_entry("(3.23)", "Theorem A", rem.times, rem.rho_sq, 0.0, eps2));

  const TruncatedIntegral diss = weighted_dissipation_integral(rem);
  const double total =
      (diss.value + (std::isfinite(diss.tail) ? diss.tail : 0.0)) / eps2;
  rep.entries.push_back(AuditEntry{"(3.24)", "Theorem A", total,
                                   Window{0.0, rem.times.back()},
                                   finite_verdict(total)});
  rep.entries.push_back(AuditEntry{"(3.24) tail", "Theorem A", diss.tail / eps2,
                                   Window{rem.times.back(), kInf}, "info"});

  const MonotonicityCheck mono = check_monotonicity(hyp, par, opt.monotonicity_slack);
  rep.entries.push_back(AuditEntry{"(3.25)", "Theorem A", mono.worst_margin,
                                   Window{0.0, rem.times.back()},
                                   mono.violations == 0 ? "pass" : "fail"});
  return rep;
}

AuditReport audit_prop31_and_B(const ParabolicTrajectory& par,
                               const HyperbolicTrajectory& hyp,
                               const MuNuProfile& profile, const AuditOptions& opt) {
  require_shared_grid(par.times, hyp.times);
  for (std::size_t k : par.op.kernel_modes()) {
    if (par.u[0][k] != 0.0 || hyp.u[0][k] != 0.0 || hyp.u_prime[0][k] != 0.0) {
      throw RegimeError("growth audit requires coercive data (no kernel component)");
    }
  }
  const double g = par.gamma;
  const double mu = profile.mu;
  const std::size_t n = par.times.size();

  std::vector<double> grow_par(n), grow_hyp_mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    grow_par[i] = std::exp(2.0 * mu * g * par.C[i]);
    grow_hyp_mu[i] = std::exp(2.0 * mu * g * hyp.C[i]);
  }

  AuditReport rep;
  rep.title = "prop31_b";
  rep.meta.epsilon = hyp.epsilon;
  rep.meta.gamma = g;
  rep.meta.mu = mu;
  rep.meta.nu = profile.nu;
  rep.meta.delta = profile.delta;
  rep.meta.regime = to_string(profile.regime);
  rep.meta.eigenvalues.assign(par.op.eigenvalues().begin(), par.op.eigenvalues().end());
  rep.meta.lower_floor = opt.lower_floor;

  rep.entries.push_back(sup_entry("(3.33)", "Proposition 3.1", par.times, grow_par, -1.0));
  if (profile.nu) {
    std::vector<double> grow_hyp_nu(n);
    for (std::size_t i = 0; i < n; ++i) {
      grow_hyp_nu[i] = std::exp(2.0 * *profile.nu * g * hyp.C[i]);
    }
    rep.entries.push_back(
        sup_entry("(3.34)", "Proposition 3.1", hyp.times, grow_hyp_nu, -1.0));
  }
  rep.entries.push_back(inf_entry("(3.35)", "Proposition 3.1", par.times, grow_par,
                                  -1.0, opt.lower_floor));
  rep.entries.push_back(inf_entry("(3.36)", "Proposition 3.1", hyp.times, grow_hyp_mu,
                                  -1.0, opt.lower_floor));

  // Component bounds weight by exp(2 nu C) / exp(2 mu C) without the gamma.
  const ComponentSeries comp = components(hyp, profile);
  if (profile.nu) {
    std::vector<double> b26(n), b27(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(2.0 * *profile.nu * hyp.C[i]);
      b26[i] = weighted_norm_sq(hyp.op, 0.5, hyp.u[i]) * w;
      const double c = hyp.c[i];
      const double kinetic = c > 0.0 ? comp.u_nu_prime[i] * comp.u_nu_prime[i] / (c * c) : 0.0;
      b27[i] = (comp.u_nu[i] * comp.u_nu[i] + kinetic) * w;
    }
    rep.entries.push_back(sup_entry("(3.26)", "Theorem B", hyp.times, b26, 0.0));
    rep.entries.push_back(sup_entry("(3.27)", "Theorem B", hyp.times, b27, 0.0));
  }
  {
    std::vector<double> b28(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(2.0 * mu * hyp.C[i]);
      const double c = hyp.c[i];
      const double kinetic = c > 0.0 ? comp.u_mu_prime[i] * comp.u_mu_prime[i] / (c * c) : 0.0;
      b28[i] = (comp.u_mu[i] * comp.u_mu[i] + kinetic) * w;
    }
    rep.entries.push_back(sup_entry("(3.28)", "Theorem B", hyp.times, b28, 0.0));
  }
  return rep;
}

AuditReport audit_theorem_2_2(const RemainderSeries& rem, const MuNuProfile& profile) {
  if (!profile.delta) {
    throw RegimeError("wrong regime: the normalized estimates require nu <= mu");
  }
  const double d = *profile.delta;
  const double g = rem.gamma;
  const double eps = rem.epsilon;
  const double eps2 = eps * eps;
  const std::size_t n = rem.times.size();

  std::vector<double> sup1(n), sup2(n), int1(n), int2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 + rem.times[i];
    sup1[i] = rem.rho_sq[i] + rem.rho_half_sq[i] + eps * w * rem.r_prime_sq[i];
    sup2[i] = rem.rho_full_sq[i] + w * w * rem.r_prime_sq[i];
    const double ww = std::pow(w, 2.0 * d / g);
    int1[i] = ww * (w * rem.r_prime_sq[i] + rem.rho_half_sq[i] / w);
    int2[i] = ww * (w * rem.r_prime_half_sq[i] + rem.rho_full_sq[i] / w);
  }

  AuditReport rep;
  rep.title = "theorem_2_2";
  rep.meta.epsilon = eps;
  rep.meta.gamma = g;
  rep.meta.mu = profile.mu;
  rep.meta.nu = profile.nu;
  rep.meta.delta = profile.delta;
  rep.meta.regime = to_string(profile.regime);

  rep.entries.push_back(
      sup_entry("2.2(1) sup", "Theorem 2.2 (1)", rem.times, sup1, d / g, eps2));
  rep.entries.push_back(
      integral_entry("2.2(1) integral", "Theorem 2.2 (1)", rem.times, int1, d / g, eps2));
  rep.entries.push_back(
      sup_entry("2.2(2) sup", "Theorem 2.2 (2)", rem.times, sup2, d / g, eps2));
  rep.entries.push_back(
      integral_entry("2.2(2) integral", "Theorem 2.2 (2)", rem.times, int2, d / g, eps2));
  return rep;
}

GSeries compute_g(const ParabolicTrajectory& par, const HyperbolicTrajectory& hyp) {
  if (!(par.op == hyp.op)) throw GridError("forcing term needs a shared operator");
  require_shared_grid(par.times, hyp.times);
  GSeries out;
  out.epsilon = hyp.epsilon;
  out.times = par.times;
  const std::size_t n = par.times.size();
  out.g.reserve(n);
  out.g_sq.reserve(n);
  out.g_half_sq.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto der = derivatives(par, i);
    const SpectralVector au = apply_power(par.op, 1.0, par.u[i]);
    const double dc = hyp.c[i] - par.c[i];
    const SpectralVector gi =
        sub(scaled(au, -dc), scaled(der.u_second, hyp.epsilon));
    out.g_sq.push_back(weighted_norm_sq(par.op, 0.0, gi));
    out.g_half_sq.push_back(weighted_norm_sq(par.op, 0.5, gi));
    out.g.push_back(gi);
  }
  return out;
}

AuditReport audit_prop_C(const GSeries& g, const RemainderSeries& rem, double delta) {
  require_shared_grid(g.times, rem.times);
  const double gamma = rem.gamma;
  const double eps2 = rem.epsilon * rem.epsilon;
  const std::size_t n = g.times.size();

  std::vector<double> gw(n), ghw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::pow(1.0 + g.times[i], 1.0 + 2.0 * delta / gamma);
    gw[i] = w * g.g_sq[i];
    ghw[i] = w * g.g_half_sq[i];
  }

  AuditReport rep;
  rep.title = "prop_c";
  rep.meta.epsilon = rem.epsilon;
  rep.meta.gamma = gamma;
  rep.meta.delta = delta;

  rep.entries.push_back(
      sup_entry("(3.29)", "Proposition C", rem.times, rem.rho_sq, delta / gamma, eps2));
  rep.entries.push_back(
      integral_entry("(3.30)", "Proposition C", g.times, gw, delta / gamma, eps2));
  rep.entries.push_back(
      integral_entry("(3.31)", "Proposition C", g.times, ghw, delta / gamma, eps2));
  rep.entries.push_back(
      sup_entry("(3.32)", "Proposition C", g.times, g.g_sq, 2.0 + delta / gamma, eps2));
  return rep;
}

double sup_weighted_rho(const RemainderSeries& rem, double delta) {
  double best = 0.0;
  for (std::size_t i = 0; i < rem.times.size(); ++i) {
    best = std::max(best,
                    std::pow(1.0 + rem.times[i], delta / rem.gamma) * rem.rho_sq[i]);
  }
  return best;
}

double optimality_statistic(const RemainderSeries& rem, const MuNuProfile& profile) {
  if (!profile.delta) {
    throw RegimeError("optimality statistic requires nu <= mu");
  }
  const double d = *profile.delta;
  const double t_star = std::pow(rem.epsilon, -d);
  if (!grid_contains(rem.times, t_star)) {
    throw GridError("sample grid does not contain t = eps^{-delta}");
  }
  return sup_weighted_rho(rem, d);
}

RateFit sweep_convergence(std::span<const double> epsilons,
                          std::span<const double> statistics) {
  if (epsilons.size() != statistics.size()) {
    throw DimensionError("sweep_convergence: ladder lengths differ");
  }
  if (epsilons.size() < 3) {
    throw Error("sweep_convergence: fewer than three ladder points");
  }
  std::vector<double> x, y;
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !(statistics[i] > 0.0)) {
      throw Error("sweep_convergence: nonpositive ladder point");
    }
    x.push_back(std::log(epsilons[i]));
    y.push_back(std::log(statistics[i]));
    lo = std::min(lo, epsilons[i]);
    hi = std::max(hi, epsilons[i]);
  }
  const LinearFit f = linear_fit(x, y);
  return RateFit{f.slope, f.intercept, f.rms_residual, Window{lo, hi}};
}

}  // namespace kirchlab
