#include "kirchlab/numeric.hpp"

#include "kirchlab/errors.hpp"

namespace kirchlab {

std::vector<double> cumulative_trapezoid(std::span<const double> times,
                                         std::span<const double> values) {
  if (times.size() != values.size()) {
    throw DimensionError("cumulative_trapezoid: times/values size mismatch");
  }
  std::vector<double> out(times.size(), 0.0);
  CompensatedSum acc;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    acc.add(0.5 * dt * (values[i] + values[i - 1]));
    out[i] = acc.value();
  }
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("linear_fit: size mismatch");
  }
  if (x.size() < 2) {
    throw Error("linear_fit needs at least two points");
  }
  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() == 0.0) {
    throw Error("linear_fit: degenerate abscissa");
  }
  LinearFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  CompensatedSum srr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    srr.add(r * r);
  }
  fit.rms_residual = std::sqrt(srr.value() / n);
  return fit;
}

}  // namespace kirchlab
