#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kirchlab/errors.hpp"
#include "kirchlab/grid.hpp"
#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/parabolic.hpp"
#include "kirchlab/remainder.hpp"
#include "kirchlab/spectral.hpp"

using namespace kirchlab;

TEST_SUITE("remainder") {

TEST_CASE("corrector starts at zero with slope theta0") {
  const SpectralVector theta0{2.0, -1.0};
  const auto at0 = corrector(theta0, 1e-3, 0.0);
  CHECK(at0.value == SpectralVector{0.0, 0.0});
  CHECK(at0.derivative == theta0);
}

TEST_CASE("corrector saturates at eps theta0") {
  const SpectralVector theta0{2.0, -1.0};
  const double eps = 1e-3;
  const auto late = corrector(theta0, eps, 100.0 * eps);
  for (std::size_t k = 0; k < theta0.size(); ++k) {
    CHECK(late.value[k] == doctest::Approx(eps * theta0[k]).epsilon(1e-12));
    CHECK(std::abs(late.derivative[k]) < 1e-40);
  }
}

TEST_CASE("corrector satisfies eps theta'' + theta' = 0") {
  const SpectralVector theta0{1.0};
  const double eps = 1.0;
  const double t = 0.5;
  const double h = 1e-3;
  double f[5];
  for (int j = -2; j <= 2; ++j) {
    f[j + 2] = corrector(theta0, eps, t + j * h).value[0];
  }
  // Fourth-order stencils: truncation is ~1e-13 here, but cancellation in the
  // second difference leaves roundoff near 1e-10 against terms of size 0.6.
  const double d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
  const double d2 =
      (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
  CHECK(std::abs(eps * d2 + d1) < 1e-9);
  CHECK(d1 == doctest::Approx(corrector(theta0, eps, t).derivative[0]).epsilon(1e-10));
}

TEST_CASE("numerical corrector oracle confirms the closed form") {
  const SpectralVector theta0{2.0, -1.0};
  const double eps = 1e-2;
  GridSpec spec;
  spec.horizon = 1.0;
  spec.epsilon = eps;
  const auto grid = make_sample_grid(spec);
  const auto series = corrector_oracle(theta0, eps, grid);
  REQUIRE(series.times.size() == grid.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto exact = corrector(theta0, eps, grid[i]);
    for (std::size_t k = 0; k < theta0.size(); ++k) {
      worst = std::max(worst, std::abs(series.value[i][k] - exact.value[k]));
      worst = std::max(worst, std::abs(series.derivative[i][k] - exact.derivative[k]));
    }
  }
  CHECK(worst < 1e-10);
}

namespace {

struct Pair {
  HyperbolicTrajectory hyp;
  ParabolicTrajectory par;
  MuNuProfile profile;
  SpectralVector theta0;
};

Pair solve_pair(const SpectralOperator& op, const InitialData& data, double eps,
                double horizon) {
  GridSpec spec;
  spec.horizon = horizon;
  spec.epsilon = eps;
  const auto grid = make_sample_grid(spec);
  Pair out;
  out.hyp = solve_hyperbolic(op, data, eps, grid, 1e-10);
  out.par = solve_profile(op, data, grid, 1e-11);
  out.profile = classify(op, data);
  out.theta0 = compute_theta0(op, data);
  return out;
}

}  // namespace

TEST_CASE("remainders vanish at t = 0") {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({0.0, 1.0}, {1.0, 0.0}, 1.0);
  const auto pair = solve_pair(op, data, 1e-2, 10.0);
  const auto rem = build_remainders(pair.hyp, pair.par, pair.theta0, &pair.profile);
  CHECK(rem.rho_sq[0] == 0.0);
  CHECK(rem.r_prime_sq[0] == 0.0);
  CHECK(rem.epsilon == 1e-2);
  CHECK(rem.delta == doctest::Approx(0.5));
}

TEST_CASE("series entries match their definitions") {
  const SpectralOperator op({1.0, 4.0});
  const InitialData data({1.0, 0.5}, {0.0, 0.25}, 1.0);
  const auto pair = solve_pair(op, data, 1e-2, 10.0);
  const auto rem = build_remainders(pair.hyp, pair.par, pair.theta0, &pair.profile);
  for (std::size_t i = 0; i < rem.times.size(); ++i) {
    const auto rho = sub(pair.hyp.u[i], pair.par.u[i]);
    for (std::size_t k = 0; k < op.size(); ++k) {
      CHECK(rem.rho[i][k] == rho[k]);
    }
    CHECK(rem.rho_sq[i] == doctest::Approx(dot(rho, rho)).epsilon(1e-14));
    CHECK(rem.rho_half_sq[i] ==
          doctest::Approx(weighted_norm_sq(op, 0.5, rho)).epsilon(1e-14));
    CHECK(rem.rho_full_sq[i] ==
          doctest::Approx(weighted_norm_sq(op, 1.0, rho)).epsilon(1e-14));
    const auto par_d = derivatives(pair.par, i);
    const auto rho_prime = sub(pair.hyp.u_prime[i], par_d.u_prime);
    CHECK(rem.rho_prime_sq[i] ==
          doctest::Approx(dot(rho_prime, rho_prime)).epsilon(1e-12));
    const auto r_prime =
        sub(rho_prime, corrector(pair.theta0, rem.epsilon, rem.times[i]).derivative);
    CHECK(rem.r_prime_sq[i] == doctest::Approx(dot(r_prime, r_prime)).epsilon(1e-12));
  }
}

TEST_CASE("well-prepared data has no boundary layer") {
  // u1 = -|A^{1/2}u0|^{2 gamma} A u0 makes theta0 vanish, so r' and rho'
  // coincide.
  const SpectralOperator op({1.0, 4.0});
  const SpectralVector u0{1.0, 0.5};
  const double c0 = std::pow(weighted_norm_sq(op, 0.5, u0), 1.0);
  const InitialData data(u0, scaled(apply_power(op, 1.0, u0), -c0), 1.0);
  const auto theta0 = compute_theta0(op, data);
  for (std::size_t k = 0; k < theta0.size(); ++k) CHECK(theta0[k] == 0.0);
  const auto pair = solve_pair(op, data, 1e-2, 10.0);
  const auto rem = build_remainders(pair.hyp, pair.par, theta0, nullptr);
  for (std::size_t i = 0; i < rem.times.size(); ++i) {
    CHECK(rem.r_prime_sq[i] == rem.rho_prime_sq[i]);
  }
  CHECK(std::isnan(rem.delta));
}

TEST_CASE("mismatched grids are rejected") {
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  const std::vector<double> g1{0.0, 0.5, 1.0};
  const std::vector<double> g2{0.0, 0.6, 1.0};
  const auto hyp = solve_hyperbolic(op, data, 1e-2, g1, 1e-9);
  const auto par = solve_profile(op, data, g2);
  CHECK_THROWS_AS(build_remainders(hyp, par, compute_theta0(op, data)), GridError);
  CHECK_THROWS_AS(check_monotonicity(hyp, par), GridError);
}

TEST_CASE("monotonicity margin is algebraic for gamma = 1") {
  // For gamma = 1 the defect <c_e A u_e - c A u, rho> - (c_e + c)/2 |A^{1/2}rho|^2
  // equals (s - sigma)^2 / 2 with s = |A^{1/2}u_e|^2, sigma = |A^{1/2}u|^2,
  // independent of the cross terms. Check on random states.
  const SpectralOperator op({1.0, 2.0, 5.0});
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SpectralVector ue{coef(rng), coef(rng), coef(rng)};
    SpectralVector up{coef(rng), coef(rng), coef(rng)};
    const double s = weighted_norm_sq(op, 0.5, ue);
    const double sigma = weighted_norm_sq(op, 0.5, up);
    const auto rho = sub(ue, up);
    const double lhs =
        dot(sub(scaled(apply_power(op, 1.0, ue), s), scaled(apply_power(op, 1.0, up), sigma)),
            rho);
    const double rhs = 0.5 * (s + sigma) * weighted_norm_sq(op, 0.5, rho);
    const double margin = lhs - rhs;
    const double expected = 0.5 * (s - sigma) * (s - sigma);
    CHECK(margin == doctest::Approx(expected).epsilon(1e-10));
    CHECK(margin >= -1e-14);
  }
}

TEST_CASE("solver runs satisfy the monotonicity inequality") {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({0.0, 1.0}, {1.0, 0.0}, 1.0);
  const auto pair = solve_pair(op, data, 1e-2, 100.0);
  const auto check = check_monotonicity(pair.hyp, pair.par);
  CHECK(check.violations == 0);
  CHECK(check.worst_margin >= -1e-12);
}

TEST_CASE("weighted dissipation integral is finite with a small tail") {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({0.0, 1.0}, {1.0, 0.0}, 1.0);
  const auto pair = solve_pair(op, data, 1e-2, 1000.0);
  const auto rem = build_remainders(pair.hyp, pair.par, pair.theta0, &pair.profile);
  const auto integral = weighted_dissipation_integral(rem);
  CHECK(integral.value > 0.0);
  CHECK(integral.tail >= 0.0);
  CHECK(integral.tail < 0.05 * integral.value);
}

}  // TEST_SUITE
