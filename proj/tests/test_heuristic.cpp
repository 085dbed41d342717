#include <cmath>
#include <vector>

#include "doctest.h"
#include "kirchlab/errors.hpp"
#include "kirchlab/grid.hpp"
#include "kirchlab/heuristic.hpp"

using namespace kirchlab;

namespace {

std::vector<double> toy_grid(double horizon) {
  GridSpec spec;
  spec.horizon = horizon;
  return make_sample_grid(spec);
}

}  // namespace

TEST_SUITE("heuristic") {

TEST_CASE("toy run starts at the prescribed state") {
  const auto run = solve_toy(1.0, 0.5, 1.0, 1e-2, toy_grid(10.0));
  CHECK(run.w[0] == 1.0);
  CHECK(run.v[0] == 1e-2);
  CHECK(run.psi[0] == 1.0);
  CHECK(run.delta == doctest::Approx(0.5));
}

TEST_CASE("equal frequencies keep v proportional to w") {
  // With mu = nu both components see the same coefficient, so v/w stays at
  // its initial ratio eps.
  const double eps = 1e-2;
  const auto run = solve_toy(2.0, 2.0, 1.0, eps, toy_grid(10.0));
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    CHECK(run.v[i] == doctest::Approx(eps * run.w[i]).epsilon(1e-9));
  }
}

TEST_CASE("eps = 0 reproduces the closed-form limit") {
  const double mu = 1.0;
  const double nu = 0.5;
  const double gamma = 1.0;
  const auto run = solve_toy(mu, nu, gamma, 0.0, toy_grid(100.0));
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    CHECK(run.psi[i] ==
          doctest::Approx(toy_psi_limit(mu, nu, gamma, run.times[i])).epsilon(1e-8));
  }
}

TEST_CASE("closed-form limit at simple parameters") {
  // delta = 1/2 and k = nu mu^gamma = 1/2 give psi = (1 + 2t)^{-1/4}.
  CHECK(toy_psi_limit(1.0, 0.5, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(toy_psi_limit(1.0, 0.5, 1.0, 4.0) ==
        doctest::Approx(std::pow(9.0, -0.25)).epsilon(1e-12));
  CHECK(toy_psi_limit(1.0, 1.0, 1.0, 1.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("substitution identity links the pair to the scalar solve") {
  const double eps = 1e-2;
  const double delta = 0.5;
  const auto run = solve_toy(1.0, 0.5, 1.0, eps, toy_grid(100.0));
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    CHECK(run.v[i] == doctest::Approx(eps * run.psi[i]).epsilon(1e-8));
    CHECK(run.w[i] ==
          doctest::Approx(std::pow(run.psi[i], 1.0 / delta)).epsilon(1e-8));
  }
}

TEST_CASE("toy components decay monotonically and stay positive") {
  const auto run = solve_toy(1.0, 0.5, 1.5, 1e-3, toy_grid(1000.0));
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    CHECK(run.w[i] > 0.0);
    CHECK(run.v[i] > 0.0);
    CHECK(run.psi[i] > 0.0);
    if (i > 0) {
      CHECK(run.w[i] <= run.w[i - 1]);
      CHECK(run.v[i] <= run.v[i - 1]);
      CHECK(run.psi[i] <= run.psi[i - 1]);
    }
  }
}

TEST_CASE("parameter validation") {
  const auto grid = toy_grid(1.0);
  CHECK_THROWS_AS(solve_toy(1.0, 2.0, 1.0, 1e-2, grid), ConfigError);   // nu > mu
  CHECK_THROWS_AS(solve_toy(1.0, 0.5, 0.5, 1e-2, grid), ConfigError);   // gamma < 1
  CHECK_THROWS_AS(solve_toy(1.0, 0.0, 1.0, 1e-2, grid), ConfigError);   // nu = 0
  CHECK_THROWS_AS(solve_toy(1.0, 0.5, 1.0, -1e-2, grid), ConfigError);  // eps < 0
}

TEST_CASE("subsolution matches hand values and decreases") {
  CHECK(subsolution_z(0.5, 1.0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(subsolution_z(1.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(std::sqrt(0.2)).epsilon(1e-12));
  double prev = subsolution_z(0.5, 1.0, 1.0, 0.0);
  for (double t = 1.0; t <= 100.0; t *= 2.0) {
    const double z = subsolution_z(0.5, 1.0, 1.0, t);
    CHECK(z < prev);
    prev = z;
  }
}

TEST_CASE("rescaled slow component stays in a positive band") {
  const double eps = 1e-2;
  const auto run = solve_toy(1.0, 0.5, 1.0, eps, toy_grid(100.0));
  const auto band = toy_remainder_band(run, 1.0, 0.5 * std::pow(eps, -0.5));
  CHECK(band.lo > 0.0);
  CHECK(band.hi >= band.lo);
  CHECK(band.hi < 2.0);
}

TEST_CASE("scalar comparison argument verifies on a short ladder") {
  const std::vector<double> ladder{1e-1, 1e-2};
  const auto rep = verify_lemma_3_2(0.5, 1.0, 1.0, ladder);
  CHECK(rep.title == "lemma_3_2");
  CHECK(rep.passed());
  std::size_t margins = 0;
  std::size_t endpoints = 0;
  for (const auto& e : rep.entries) {
    if (e.name.rfind("psi vs z", 0) == 0) ++margins;
    if (e.name.rfind("M28, ", 0) == 0) ++endpoints;
  }
  CHECK(margins == ladder.size());
  CHECK(endpoints == ladder.size());
}

TEST_CASE("decay steepens once the fast component takes over") {
  // Past t ~ eps^{-delta} the slow component leaves the eps-scaled profile;
  // the fitted late-time rate must fall below the pre-crossover -1/4.
  const auto run = solve_toy(1.0, 0.5, 1.0, 0.3, toy_grid(1000.0));
  const auto fit = fit_rate(run.times, run.v, Window{50.0, 1000.0});
  CHECK(fit.exponent < -0.25);
}

}  // TEST_SUITE
