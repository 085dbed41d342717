#include "kirchlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kirchlab/errors.hpp"
#include "kirchlab/numeric.hpp"

namespace kirchlab {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

// Relative tolerance for the collinearity test in classify(). The vectors
// compared are exact user data, so this only absorbs rounding in the dots.
constexpr double kCollinearRelTol = 1e-12;

}  // namespace

SpectralVector add(const SpectralVector& a, const SpectralVector& b) {
  require_same_size(a.size(), b.size(), "add");
  SpectralVector out = a;
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return out;
}

SpectralVector sub(const SpectralVector& a, const SpectralVector& b) {
  require_same_size(a.size(), b.size(), "sub");
  SpectralVector out = a;
  for (std::size_t k = 0; k < b.size(); ++k) out[k] -= b[k];
  return out;
}

SpectralVector scaled(const SpectralVector& a, double s) {
  SpectralVector out = a;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues) {
  if (eigenvalues.empty()) {
    throw DimensionError("operator needs at least one eigenvalue");
  }
  for (double ev : eigenvalues) {
    if (!(ev >= 0.0)) {
      throw Error("operator eigenvalues must be nonnegative, got " +
                  std::to_string(ev));
    }
  }
  std::vector<int> order(eigenvalues.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return eigenvalues[a] < eigenvalues[b];
  });
  eigenvalues_.reserve(eigenvalues.size());
  labels_ = order;
  for (int idx : order) eigenvalues_.push_back(eigenvalues[idx]);
}

std::vector<std::size_t> SpectralOperator::modes_in_interval(
    double lo, double hi, bool lo_inclusive, bool hi_inclusive) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
    const double ev = eigenvalues_[k];
    const bool above = lo_inclusive ? ev >= lo : ev > lo;
    const bool below = hi_inclusive ? ev <= hi : ev < hi;
    if (above && below) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> SpectralOperator::kernel_modes() const {
  return modes_in_interval(0.0, 0.0);
}

SpectralVector apply_power(const SpectralOperator& op, double alpha,
                           const SpectralVector& v) {
  require_same_size(op.size(), v.size(), "apply_power");
  if (alpha == 0.0) return v;
  SpectralVector out = v;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double ev = op.eigenvalue(k);
    out[k] = ev == 0.0 ? 0.0 : std::pow(ev, alpha) * v[k];
  }
  return out;
}

double weighted_norm_sq(const SpectralOperator& op, double alpha,
                        const SpectralVector& v) {
  require_same_size(op.size(), v.size(), "weighted_norm");
  CompensatedSum sum;
  for (std::size_t k = 0; k < v.size(); ++k) {
    double w = 1.0;
    if (alpha != 0.0) {
      const double ev = op.eigenvalue(k);
      w = ev == 0.0 ? 0.0 : std::pow(ev, 2.0 * alpha);
    }
    sum.add(w * v[k] * v[k]);
  }
  return sum.value();
}

double weighted_norm(const SpectralOperator& op, double alpha,
                     const SpectralVector& v) {
  return std::sqrt(weighted_norm_sq(op, alpha, v));
}

double dot(const SpectralVector& u, const SpectralVector& v) {
  require_same_size(u.size(), v.size(), "dot");
  CompensatedSum sum;
  for (std::size_t k = 0; k < u.size(); ++k) sum.add(u[k] * v[k]);
  return sum.value();
}

InitialData::InitialData(SpectralVector u0_, SpectralVector u1_, double gamma_)
    : u0(std::move(u0_)), u1(std::move(u1_)), gamma(gamma_) {
  require_same_size(u0.size(), u1.size(), "initial data");
  if (!(gamma >= 1.0)) {
    throw ConfigError("gamma must be >= 1, got " + std::to_string(gamma));
  }
}

bool is_nondegenerate(const SpectralOperator& op, const InitialData& data) {
  return weighted_norm_sq(op, 0.5, data.u0) > 0.0;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::deteriorated: return "deteriorated";
    case Regime::improved: return "improved";
    case Regime::improved_collinear: return "improved-collinear";
    case Regime::kernel_only_u1: return "kernel-only-u1";
  }
  return "unknown";
}

double MuNuProfile::rate_delta(double gamma) const {
  const double cap = 2.0 * gamma + 1.0;
  switch (regime) {
    case Regime::deteriorated:
      return *nu / mu;
    case Regime::improved:
      return nu ? std::min(cap, *nu / mu) : cap;
    case Regime::improved_collinear:
      return nu_tail ? std::min(cap, *nu_tail / mu) : cap;
    case Regime::kernel_only_u1:
      return cap;
  }
  return cap;
}

MuNuProfile classify(const SpectralOperator& op, const InitialData& data,
                     double zero_tol) {
  require_same_size(op.size(), data.u0.size(), "classify");

  const auto lowest_active = [&](const SpectralVector& v) -> std::optional<double> {
    for (std::size_t k = 0; k < op.size(); ++k) {
      if (op.eigenvalue(k) > 0.0 && std::abs(v[k]) > zero_tol) {
        return op.eigenvalue(k);
      }
    }
    return std::nullopt;
  };

  MuNuProfile profile;
  const auto mu = lowest_active(data.u0);
  if (!mu) {
    throw RegimeError("u0 carries no positive-frequency component");
  }
  profile.mu = *mu;
  profile.nu = lowest_active(data.u1);

  const auto split = [&](const SpectralVector& v, double freq, SpectralVector& head,
                         SpectralVector& tail) {
    head = SpectralVector(std::vector<double>(v.size(), 0.0));
    tail = head;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double ev = op.eigenvalue(k);
      if (ev == freq) {
        head[k] = v[k];
      } else if (ev > freq) {
        tail[k] = v[k];
      }
    }
  };

  split(data.u0, profile.mu, profile.v0, profile.w0);
  if (profile.nu) {
    split(data.u1, *profile.nu, profile.v1, profile.w1);
    for (std::size_t k = 0; k < op.size(); ++k) {
      if (op.eigenvalue(k) > profile.mu && std::abs(data.u1[k]) > zero_tol) {
        profile.nu_tail = op.eigenvalue(k);
        break;
      }
    }
  } else {
    profile.v1 = SpectralVector(std::vector<double>(op.size(), 0.0));
    profile.w1 = profile.v1;
  }

  if (!profile.nu) {
    bool u1_zero = true;
    for (double c : data.u1.coeffs) {
      if (std::abs(c) > zero_tol) {
        u1_zero = false;
        break;
      }
    }
    profile.regime = u1_zero ? Regime::improved : Regime::kernel_only_u1;
  } else if (*profile.nu > profile.mu) {
    profile.regime = Regime::improved;
  } else if (*profile.nu < profile.mu) {
    profile.regime = Regime::deteriorated;
  } else {
    // nu == mu: collinear components give the improved rate, independent
    // ones the deteriorated rate.
    const double n0 = dot(profile.v0, profile.v0);
    const double n1 = dot(profile.v1, profile.v1);
    const double d = dot(profile.v0, profile.v1);
    const bool collinear = std::abs(d * d - n0 * n1) <= kCollinearRelTol * n0 * n1;
    profile.regime = collinear ? Regime::improved_collinear : Regime::deteriorated;
  }

  if (profile.nu && *profile.nu <= profile.mu) {
    profile.delta = *profile.nu / profile.mu;
  }
  return profile;
}

SpectralVector compute_theta0(const SpectralOperator& op, const InitialData& data) {
  const double c0 = nonlinear_coefficient(weighted_norm_sq(op, 0.5, data.u0),
                                          data.gamma);
  return add(data.u1, scaled(apply_power(op, 1.0, data.u0), c0));
}

double nonlinear_coefficient(double s, double gamma) {
  return s > 1e-300 ? std::pow(s, gamma) : 0.0;
}

}  // namespace kirchlab
