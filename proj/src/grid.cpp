#include "kirchlab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "kirchlab/errors.hpp"

namespace kirchlab {

namespace {
constexpr double kDedupeRelTol = 1e-12;
}

std::vector<double> make_sample_grid(const GridSpec& spec) {
  if (!(spec.horizon > 0.0)) throw GridError("horizon must be positive");
  if (spec.samples_per_decade < 1) throw GridError("samples_per_decade must be >= 1");

  std::vector<double> pts;
  pts.push_back(0.0);

  double t_lo = spec.t_min;
  if (spec.epsilon > 0.0) {
    t_lo = spec.epsilon / 10.0;
    pts.push_back(spec.epsilon / 10.0);
    pts.push_back(spec.epsilon);
    pts.push_back(5.0 * spec.epsilon);
  }
  if (spec.t_star > 0.0) pts.push_back(spec.t_star);
  double t_hi = std::max(spec.horizon, spec.t_star);
  pts.push_back(t_hi);

  const double step = 1.0 / spec.samples_per_decade;
  const double k_hi = std::log10(t_hi / t_lo);
  for (double k = 0.0; k < k_hi; k += step) {
    pts.push_back(t_lo * std::pow(10.0, k));
  }

  std::sort(pts.begin(), pts.end());
  std::vector<double> grid;
  grid.reserve(pts.size());
  for (double t : pts) {
    if (!grid.empty() && t - grid.back() <= kDedupeRelTol * std::max(1.0, t)) continue;
    grid.push_back(t);
  }
  return grid;
}

bool grid_contains(const std::vector<double>& grid, double t) {
  for (double s : grid) {
    if (std::abs(s - t) <= 1e-9 * std::max(std::abs(t), 1e-300)) return true;
  }
  return false;
}

}  // namespace kirchlab
