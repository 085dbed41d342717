#include "kirchlab/ode.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "kirchlab/errors.hpp"
#include "kirchlab/numeric.hpp"

namespace kirchlab::ode {

namespace {

constexpr double kMinFactor = 0.2;
constexpr double kRejectFloor = 0.1;
constexpr double kNewtonTol = 1e-2;  // fraction of the local error allowance

double scaled_rms(std::span<const double> e, std::span<const double> y_old,
                  std::span<const double> y_new, double atol, double rtol) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
    const double q = e[i] / sc;
    sum.add(q * q);
  }
  return std::sqrt(sum.value() / static_cast<double>(e.size()));
}

double min_step_at(double t) {
  return 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
}

void check_grid(std::span<const double> samples) {
  if (samples.empty()) throw GridError("sample grid is empty");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i] > samples[i - 1])) {
      throw GridError("sample grid must be strictly increasing");
    }
  }
}

double initial_step(const Rhs& rhs, double t, std::span<const double> y,
                    double first_gap, const Options& opt, Stats& stats) {
  if (opt.h_init > 0.0) return std::min(opt.h_init, first_gap);
  std::vector<double> f(y.size());
  rhs(t, y, f);
  ++stats.rhs_evals;
  CompensatedSum sy, sf;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
    sy.add((y[i] / sc) * (y[i] / sc));
    sf.add((f[i] / sc) * (f[i] / sc));
  }
  const double d0 = std::sqrt(sy.value() / static_cast<double>(y.size()));
  const double d1 = std::sqrt(sf.value() / static_cast<double>(y.size()));
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::max(1.0, first_gap)
                                      : 0.01 * d0 / d1;
  return std::min({h, first_gap, opt.h_max});
}

// Shared adaptive loop. try_step(t, y, h, ynew, err, quad_inc) returns false
// when the step could not be formed at all (stage iteration failure); err is
// the scaled estimate to compare against 1.
template <typename TryStep>
Stats drive(std::span<const double> y0, std::span<const double> samples,
            const Options& opt, const SampleFn& on_sample, const AcceptFn& on_accept,
            int order, TryStep&& try_step, double h0, Stats& stats) {
  const double alpha = 0.7 / order;
  const double beta = 0.4 / order;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> ynew(y.size());
  double t = samples[0];
  CompensatedSum quad_total;
  if (on_sample) on_sample(0, t, y, 0.0);

  double h = h0;
  double err_prev = 1e-4;
  std::size_t i_next = 1;

  while (i_next < samples.size()) {
    double h_try = std::min(h, opt.h_max);
    if (opt.step_cap) h_try = std::min(h_try, opt.step_cap(t));
    const double gap = samples[i_next] - t;
    bool landing = false;
    if (gap <= h_try * (1.0 + 1e-12)) {
      h_try = gap;
      landing = true;
    }
    if (h_try < min_step_at(t)) {
      throw ToleranceError("step size underflow at t = " + std::to_string(t));
    }

    double err = 0.0;
    double quad_inc = 0.0;
    if (!try_step(t, y, h_try, ynew, err, quad_inc)) {
      ++stats.rejected;
      h = h_try * 0.25;
      continue;
    }

    if (err <= 1.0) {
      ++stats.accepted;
      t = landing ? samples[i_next] : t + h_try;
      y = ynew;
      quad_total.add(quad_inc);
      if (on_accept) on_accept(t, y);
      if (landing && on_sample) on_sample(i_next, t, y, quad_total.value());
      if (landing) ++i_next;
      double fac = err == 0.0 ? opt.max_growth
                              : opt.safety * std::pow(err, -alpha) *
                                    std::pow(err_prev, beta);
      fac = std::clamp(fac, kMinFactor, opt.max_growth);
      h = h_try * fac;
      err_prev = std::max(err, 1e-4);
    } else {
      ++stats.rejected;
      const double fac =
          std::max(kRejectFloor, opt.safety * std::pow(err, -1.0 / order));
      h = h_try * fac;
    }
  }
  return stats;
}

}  // namespace

Stats integrate_dopri5(const Rhs& rhs, std::span<const double> y0,
                       std::span<const double> samples, const Options& opt,
                       const SampleFn& on_sample, const QuadFn& quad,
                       const AcceptFn& on_accept) {
  check_grid(samples);
  const std::size_t n = y0.size();
  Stats stats;
  if (samples.size() == 1) {
    if (on_sample) on_sample(0, samples[0], y0, 0.0);
    return stats;
  }

  // Dormand-Prince 5(4) tableau.
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<std::vector<double>> k(7, std::vector<double>(n));
  std::vector<std::vector<double>> u(7, std::vector<double>(n));
  std::vector<double> errv(n);
  bool fsal_valid = false;

  auto try_step = [&](double t, const std::vector<double>& y, double h,
                      std::vector<double>& ynew, double& err, double& quad_inc) {
    u[0] = y;
    if (!fsal_valid) {
      rhs(t, y, k[0]);
      ++stats.rhs_evals;
    }
    for (std::size_t i = 0; i < n; ++i) u[1][i] = y[i] + h * a21 * k[0][i];
    rhs(t + c[1] * h, u[1], k[1]);
    for (std::size_t i = 0; i < n; ++i)
      u[2][i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    rhs(t + c[2] * h, u[2], k[2]);
    for (std::size_t i = 0; i < n; ++i)
      u[3][i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    rhs(t + c[3] * h, u[3], k[3]);
    for (std::size_t i = 0; i < n; ++i)
      u[4][i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] +
                            a54 * k[3][i]);
    rhs(t + c[4] * h, u[4], k[4]);
    for (std::size_t i = 0; i < n; ++i)
      u[5][i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] +
                            a64 * k[3][i] + a65 * k[4][i]);
    rhs(t + c[5] * h, u[5], k[5]);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] +
                            b5 * k[4][i] + b6 * k[5][i]);
    rhs(t + h, ynew, k[6]);
    stats.rhs_evals += 6;

    for (std::size_t i = 0; i < n; ++i)
      errv[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                     e6 * k[5][i] + e7 * k[6][i]);
    err = scaled_rms(errv, y, ynew, opt.abs_tol, opt.rel_tol);

    quad_inc = 0.0;
    if (quad) {
      quad_inc = h * (b1 * quad(t, u[0]) + b3 * quad(t + c[2] * h, u[2]) +
                      b4 * quad(t + c[3] * h, u[3]) + b5 * quad(t + c[4] * h, u[4]) +
                      b6 * quad(t + c[5] * h, u[5]));
    }
    return true;
  };

  // FSAL bookkeeping: k7 of an accepted step is k1 of the next one.
  auto on_accept_fsal = [&](double t, std::span<const double> y) {
    k[0] = k[6];
    fsal_valid = true;
    if (on_accept) on_accept(t, y);
  };

  const double h0 = initial_step(rhs, samples[0], y0, samples[1] - samples[0],
                                 opt, stats);
  return drive(y0, samples, opt, on_sample, on_accept_fsal, 5, try_step, h0,
               stats);
}

Stats integrate_sdirk4(const Rhs& rhs, const Jacobian& jac,
                       std::span<const double> y0,
                       std::span<const double> samples, const Options& opt,
                       const SampleFn& on_sample, const QuadFn& quad,
                       const AcceptFn& on_accept) {
  check_grid(samples);
  const std::size_t n = y0.size();
  Stats stats;
  if (samples.size() == 1) {
    if (on_sample) on_sample(0, samples[0], y0, 0.0);
    return stats;
  }

  // L-stable, stiffly accurate SDIRK of order 4 with diagonal 1/4 and an
  // embedded order-3 weight row.
  static constexpr double gd = 0.25;
  static constexpr double c[5] = {0.25, 0.75, 11.0 / 20, 0.5, 1.0};
  static constexpr double a[5][5] = {
      {0.25, 0, 0, 0, 0},
      {0.5, 0.25, 0, 0, 0},
      {17.0 / 50, -1.0 / 25, 0.25, 0, 0},
      {371.0 / 1360, -137.0 / 2720, 15.0 / 544, 0.25, 0},
      {25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 0.25},
  };
  static constexpr double b[5] = {25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12,
                                  0.25};
  // b - bhat, bhat = (59/48, -17/96, 225/32, -85/12, 0).
  static constexpr double d[5] = {-3.0 / 16, -27.0 / 32, 25.0 / 32, 0.0, 0.25};

  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  std::vector<double> jbuf(n * n);
  MatrixXd m(n, n);
  Eigen::PartialPivLU<MatrixXd> lu;
  std::vector<std::vector<double>> k(5, std::vector<double>(n));
  std::vector<std::vector<double>> stage_y(5, std::vector<double>(n));
  std::vector<double> r(n), g(n), f(n), errv(n), ehat(n);

  double jac_t = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double>* jac_state = nullptr;
  double lu_h = -1.0;

  auto try_step = [&](double t, const std::vector<double>& y, double h,
                      std::vector<double>& ynew, double& err, double& quad_inc) {
    // Modified Newton: Jacobian frozen at the step's left state, refreshed
    // whenever (t, y) changed; the residual always uses the live stage state.
    if (jac_t != t || jac_state != &y) {
      jac(t, y, jbuf);
      ++stats.jacobian_evals;
      jac_t = t;
      jac_state = &y;
      lu_h = -1.0;
    }
    if (lu_h != h) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              (i == j ? 1.0 : 0.0) - h * gd * jbuf[i * n + j];
      lu.compute(m);
      lu_h = h;
    }

    for (int s = 0; s < 5; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (int j = 0; j < s; ++j) acc += h * a[s][j] * k[j][i];
        r[i] = acc;
      }
      std::vector<double>& ys = stage_y[s];
      ys = r;
      bool converged = false;
      double nd_prev = std::numeric_limits<double>::infinity();
      for (int it = 0; it < opt.max_newton_iters; ++it) {
        rhs(t + c[s] * h, ys, f);
        ++stats.rhs_evals;
        for (std::size_t i = 0; i < n; ++i) g[i] = ys[i] - r[i] - h * gd * f[i];
        VectorXd rhs_v = -Eigen::Map<const VectorXd>(g.data(), static_cast<Eigen::Index>(n));
        VectorXd dy = lu.solve(rhs_v);
        for (std::size_t i = 0; i < n; ++i) ys[i] += dy[static_cast<Eigen::Index>(i)];
        std::vector<double> dyv(dy.data(), dy.data() + n);
        const double nd = scaled_rms(dyv, y, ys, opt.abs_tol, opt.rel_tol);
        if (nd <= kNewtonTol) {
          converged = true;
          break;
        }
        if (it > 0 && nd > 0.9 * nd_prev) break;  // diverging or stalled
        nd_prev = nd;
      }
      if (!converged) return false;
      for (std::size_t i = 0; i < n; ++i) k[s][i] = (ys[i] - r[i]) / (h * gd);
    }

    ynew = stage_y[4];  // stiffly accurate: b equals the last stage row

    for (std::size_t i = 0; i < n; ++i) {
      errv[i] = h * (d[0] * k[0][i] + d[1] * k[1][i] + d[2] * k[2][i] +
                     d[4] * k[4][i]);
    }
    // Filter the estimate through (I - h*gd*J)^-1 so decayed stiff modes do
    // not block step growth.
    VectorXd ev = Eigen::Map<const VectorXd>(errv.data(), static_cast<Eigen::Index>(n));
    VectorXd es = lu.solve(ev);
    for (std::size_t i = 0; i < n; ++i) ehat[i] = es[static_cast<Eigen::Index>(i)];
    err = scaled_rms(ehat, y, ynew, opt.abs_tol, opt.rel_tol);

    quad_inc = 0.0;
    if (quad) {
      for (int s = 0; s < 5; ++s)
        quad_inc += h * b[s] * quad(t + c[s] * h, stage_y[s]);
    }
    return true;
  };

  const double h0 = initial_step(rhs, samples[0], y0, samples[1] - samples[0],
                                 opt, stats);
  return drive(y0, samples, opt, on_sample, on_accept, 4, try_step, h0, stats);
}

}  // namespace kirchlab::ode
