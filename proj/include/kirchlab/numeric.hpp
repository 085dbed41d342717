#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace kirchlab {

/// Neumaier-compensated accumulator. Keeps norm and quadrature sums
/// accurate to ~1 ulp independent of summand ordering or count.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Cumulative trapezoidal integral of `values` over `times`.
/// result[i] approximates the integral from times[0] to times[i].
[[nodiscard]] std::vector<double> cumulative_trapezoid(
    std::span<const double> times, std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least squares line through (x_i, y_i).
[[nodiscard]] LinearFit linear_fit(std::span<const double> x,
                                   std::span<const double> y);

}  // namespace kirchlab
