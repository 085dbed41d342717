#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "kirchlab/grid.hpp"

using namespace kirchlab;

TEST_SUITE("grid") {

TEST_CASE("default grid starts at zero and increases strictly") {
  GridSpec spec;
  const auto grid = make_sample_grid(spec);
  REQUIRE(grid.size() > 2);
  CHECK(grid.front() == 0.0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  CHECK(grid.back() == doctest::Approx(spec.horizon).epsilon(1e-12));
  CHECK(grid[1] == doctest::Approx(spec.t_min).epsilon(1e-12));
}

TEST_CASE("sample density follows samples_per_decade") {
  GridSpec spec;
  spec.horizon = 1e3;
  spec.samples_per_decade = 8;
  const auto grid = make_sample_grid(spec);
  // 6 decades from t_min = 1e-3 to 1e3 at 8 samples each, plus the endpoints.
  const auto expected = 6 * 8 + 1;
  CHECK(static_cast<int>(grid.size()) >= expected);
  CHECK(static_cast<int>(grid.size()) <= expected + 4);
}

TEST_CASE("positive epsilon inserts the layer points") {
  GridSpec spec;
  spec.epsilon = 1e-4;
  const auto grid = make_sample_grid(spec);
  CHECK(grid_contains(grid, spec.epsilon / 10.0));
  CHECK(grid_contains(grid, spec.epsilon));
  CHECK(grid_contains(grid, 5.0 * spec.epsilon));
  // The geometric range starts inside the layer.
  CHECK(grid[1] == doctest::Approx(spec.epsilon / 10.0).epsilon(1e-12));
}

TEST_CASE("t_star is sampled exactly and may extend the horizon") {
  GridSpec spec;
  spec.horizon = 100.0;
  spec.t_star = 316.227766016838;
  const auto grid = make_sample_grid(spec);
  CHECK(grid_contains(grid, spec.t_star));
  CHECK(grid.back() >= spec.t_star);
  const bool exact = std::find(grid.begin(), grid.end(), spec.t_star) != grid.end();
  CHECK(exact);
}

TEST_CASE("grid_contains uses a relative tolerance") {
  const std::vector<double> grid{0.0, 1.0, 10.0};
  CHECK(grid_contains(grid, 1.0));
  CHECK(grid_contains(grid, 1.0 + 1e-10));
  CHECK_FALSE(grid_contains(grid, 1.0 + 1e-7));
  CHECK_FALSE(grid_contains(grid, 2.0));
}

}  // TEST_SUITE
