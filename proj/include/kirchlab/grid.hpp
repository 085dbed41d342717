#pragma once

#include <vector>

namespace kirchlab {

struct GridSpec {
  double horizon = 1e3;
  int samples_per_decade = 16;
  /// Perturbation parameter; > 0 inserts the layer points {eps/10, eps, 5 eps}
  /// and starts the geometric range at eps/10.
  double epsilon = 0.0;
  /// Extra required sample (e.g. 1/eps^delta); > 0 inserts it exactly and
  /// extends the grid when it lies beyond the horizon.
  double t_star = 0.0;
  /// First positive sample when epsilon is not set.
  double t_min = 1e-3;
};

/// Geometric (log-spaced) grid on [0, horizon]: {0} followed by
/// samples_per_decade points per decade, augmented with the layer points and
/// t_star. Strictly increasing; special points survive deduplication.
[[nodiscard]] std::vector<double> make_sample_grid(const GridSpec& spec);

/// True when grid contains t within relative tolerance 1e-9.
[[nodiscard]] bool grid_contains(const std::vector<double>& grid, double t);

}  // namespace kirchlab
