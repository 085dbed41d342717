#include <cmath>
#include <vector>

#include "doctest.h"
#include "kirchlab/errors.hpp"
#include "kirchlab/grid.hpp"
#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/parabolic.hpp"
#include "kirchlab/spectral.hpp"

using namespace kirchlab;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace

TEST_SUITE("hyperbolic") {

TEST_CASE("initial samples reproduce the data exactly") {
  const SpectralOperator op({1.0, 4.0});
  const InitialData data({1.0, -0.5}, {0.25, 0.0}, 1.0);
  const std::vector<double> grid{0.0, 0.1, 1.0};
  const auto traj = solve_hyperbolic(op, data, 1e-2, grid, 1e-9);
  CHECK(traj.u[0] == data.u0);
  CHECK(traj.u_prime[0] == data.u1);
  CHECK(traj.C[0] == 0.0);
}

TEST_CASE("kernel data follows the damped free motion") {
  // With A = 0 the equation is eps u'' + u' = 0, so
  // u(t) = u0 + eps u1 (1 - e^{-t/eps}).
  const SpectralOperator op({0.0});
  const InitialData data({1.0}, {1.0}, 1.0);
  const double eps = 1e-2;
  GridSpec spec;
  spec.horizon = 10.0;
  spec.epsilon = eps;
  const auto grid = make_sample_grid(spec);
  const auto traj = solve_hyperbolic(op, data, eps, grid, 1e-10);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = 1.0 + eps * (1.0 - std::exp(-grid[i] / eps));
    worst = std::max(worst, std::abs(traj.u[i][0] - exact));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("energy matches hand values") {
  const SpectralOperator op({1.0});
  CHECK(energy(op, 1.0, 0.25, {1.0}, {0.0}) == doctest::Approx(0.5));
  CHECK(energy(op, 1.0, 0.25, {1.0}, {2.0}) == doctest::Approx(1.5));
  CHECK(energy(op, 1.0, 0.25, {0.0}, {0.0}) == 0.0);
  const SpectralOperator op4({4.0});
  CHECK(energy(op4, 2.0, 0.5, {1.0}, {0.0}) == doctest::Approx(64.0 / 3.0));
}

TEST_CASE("stored energy agrees with the free function") {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({1.0, 0.5}, {0.0, -0.25}, 1.0);
  const std::vector<double> grid{0.0, 0.05, 0.5, 2.0};
  const auto traj = solve_hyperbolic(op, data, 1e-2, grid, 1e-9);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(traj.energy[i] ==
          doctest::Approx(energy(op, 1.0, 1e-2, traj.u[i], traj.u_prime[i]))
              .epsilon(1e-12));
  }
}

TEST_CASE("energy dissipates at rate -2|u'|^2") {
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  const double eps = 0.1;
  const auto grid = linspace(0.0, 5.0, 2001);
  const auto traj = solve_hyperbolic(op, data, eps, grid, 1e-10);
  double integral = 0.0;  // trapezoid of |u'|^2
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = dot(traj.u_prime[i - 1], traj.u_prime[i - 1]);
    const double b = dot(traj.u_prime[i], traj.u_prime[i]);
    integral += 0.5 * (a + b) * (grid[i] - grid[i - 1]);
  }
  const double drop = traj.energy.front() - traj.energy.back();
  CHECK(drop == doctest::Approx(2.0 * integral).epsilon(1e-2));
}

TEST_CASE("sampled energy never increases") {
  const SpectralOperator op({1.0, 4.0});
  const InitialData data({1.0, 1.0}, {0.5, -0.5}, 1.0);
  GridSpec spec;
  spec.horizon = 100.0;
  spec.epsilon = 1e-3;
  const auto grid = make_sample_grid(spec);
  const auto traj = solve_hyperbolic(op, data, 1e-3, grid, 1e-9);
  for (std::size_t i = 1; i < traj.energy.size(); ++i) {
    CHECK(traj.energy[i] <= traj.energy[i - 1] * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("the initial layer is resolved by many small steps") {
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {1.0}, 1.0);
  const std::vector<double> grid{0.0, 1.0};
  const auto traj = solve_hyperbolic(op, data, 1e-3, grid, 1e-9);
  // The step size is capped at eps/4 until t = 5 eps.
  CHECK(traj.layer_steps >= 20);
}

TEST_CASE("distance to the parabolic flow scales like eps") {
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  std::vector<double> stats;
  for (const double eps : {1e-2, 1e-3}) {
    GridSpec spec;
    spec.horizon = 100.0;
    spec.epsilon = eps;
    const auto grid = make_sample_grid(spec);
    const auto hyp = solve_hyperbolic(op, data, eps, grid, 1e-10);
    const auto par = solve_profile(op, data, grid, 1e-11);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double diff = hyp.u[i][0] - par.u[i][0];
      sup = std::max(sup, diff * diff / (eps * eps));
    }
    stats.push_back(sup);
  }
  const double ratio = stats[0] / stats[1];
  CHECK(ratio < 3.0);
  CHECK(ratio > 1.0 / 3.0);
}

TEST_CASE("component projections split orthogonal data") {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({0.0, 1.0}, {1.0, 0.0}, 1.0);
  const auto profile = classify(op, data);
  REQUIRE(profile.regime == Regime::deteriorated);
  const auto grid = linspace(0.0, 1.0, 1001);
  const auto traj = solve_hyperbolic(op, data, 1e-2, grid, 1e-10);
  const auto comp = components(traj, profile);
  REQUIRE(comp.u_nu.size() == grid.size());
  CHECK(comp.u_mu[0] == doctest::Approx(1.0));
  CHECK(comp.u_nu[0] == doctest::Approx(0.0));
  CHECK(comp.u_mu_prime[0] == doctest::Approx(0.0));
  CHECK(comp.u_nu_prime[0] == doctest::Approx(1.0));

  // Away from the layer the stored slopes must match finite differences.
  const double h = grid[1] - grid[0];
  for (const std::size_t i : {400u, 600u, 800u}) {
    const double fd_mu = (comp.u_mu[i + 1] - comp.u_mu[i - 1]) / (2.0 * h);
    const double fd_nu = (comp.u_nu[i + 1] - comp.u_nu[i - 1]) / (2.0 * h);
    CHECK(std::abs(comp.u_mu_prime[i] - fd_mu) < 1e-5);
    CHECK(std::abs(comp.u_nu_prime[i] - fd_nu) < 1e-5);
  }
}

TEST_CASE("single-mode projection recovers the weighted norm") {
  const SpectralOperator op({2.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  const auto profile = classify(op, data);
  const std::vector<double> grid{0.0, 0.5, 2.0};
  const auto traj = solve_hyperbolic(op, data, 1e-2, grid, 1e-9);
  const auto comp = components(traj, profile);
  CHECK(comp.u_nu.empty());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(profile.mu * comp.u_mu[i] * comp.u_mu[i] ==
          doctest::Approx(weighted_norm_sq(op, 0.5, traj.u[i])).epsilon(1e-12));
  }
}

TEST_CASE("component projection rejects degenerate profiles") {
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  const std::vector<double> grid{0.0, 1.0};
  const auto traj = solve_hyperbolic(op, data, 1e-2, grid, 1e-9);
  MuNuProfile empty_mu;
  empty_mu.mu = 1.0;
  empty_mu.v0 = SpectralVector{0.0};
  CHECK_THROWS_AS(components(traj, empty_mu), RegimeError);
  MuNuProfile empty_v1;
  empty_v1.mu = 1.0;
  empty_v1.v0 = SpectralVector{1.0};
  empty_v1.nu = 1.0;
  empty_v1.v1 = SpectralVector{0.0};
  CHECK_THROWS_AS(components(traj, empty_v1), RegimeError);
}

TEST_CASE("epsilon outside (0, eps_max] is rejected") {
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  const std::vector<double> grid{0.0, 1.0};
  CHECK_THROWS_AS(solve_hyperbolic(op, data, 0.0, grid, 1e-9), ConfigError);
  CHECK_THROWS_AS(solve_hyperbolic(op, data, 0.6, grid, 1e-9), ConfigError);
  CHECK_THROWS_AS(solve_hyperbolic(op, data, -1e-3, grid, 1e-9), ConfigError);
}

TEST_CASE("mismatched data dimensions are rejected") {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({1.0}, {0.0}, 1.0);
  const std::vector<double> grid{0.0, 1.0};
  CHECK_THROWS_AS(solve_hyperbolic(op, data, 1e-2, grid, 1e-9), DimensionError);
}

TEST_CASE("failure to decay is reported as blow-up") {
  // A large initial velocity drives |A^{1/2}u| above its starting value; with
  // a tiny decay deadline the solver must flag it.
  const SpectralOperator op({1.0});
  const InitialData data({1.0}, {10.0}, 1.0);
  const std::vector<double> grid{0.0, 0.01, 0.05};
  HyperbolicOptions options;
  options.blowup_horizon = 1e-3;
  CHECK_THROWS_AS(solve_hyperbolic(op, data, 0.1, grid, options), BlowUpError);
}

}  // TEST_SUITE
