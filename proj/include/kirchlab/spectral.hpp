#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kirchlab {

/// Coefficient vector with respect to the operator's eigenbasis.
struct SpectralVector {
  std::vector<double> coeffs;

  SpectralVector() = default;
  explicit SpectralVector(std::vector<double> c) : coeffs(std::move(c)) {}
  SpectralVector(std::initializer_list<double> c) : coeffs(c) {}

  [[nodiscard]] std::size_t size() const { return coeffs.size(); }
  double operator[](std::size_t k) const { return coeffs[k]; }
  double& operator[](std::size_t k) { return coeffs[k]; }

  bool operator==(const SpectralVector&) const = default;
};

[[nodiscard]] SpectralVector add(const SpectralVector& a, const SpectralVector& b);
[[nodiscard]] SpectralVector sub(const SpectralVector& a, const SpectralVector& b);
[[nodiscard]] SpectralVector scaled(const SpectralVector& a, double s);

/// Diagonal nonnegative self-adjoint operator, held as its eigenvalues
/// lambda_k^2 in ascending order. Eigenvalues equal to zero form the kernel.
class SpectralOperator {
 public:
  /// Empty placeholder so trajectory records can be default-constructed and
  /// filled by assignment; applying an empty operator to anything nonempty
  /// raises DimensionError through the usual size checks.
  SpectralOperator() = default;

  /// Accepts eigenvalues in any order and sorts them ascending; the original
  /// position of each entry is kept as its mode label. Throws on negative
  /// entries or an empty list.
  explicit SpectralOperator(std::vector<double> eigenvalues);

  [[nodiscard]] std::size_t size() const { return eigenvalues_.size(); }
  [[nodiscard]] double eigenvalue(std::size_t k) const { return eigenvalues_[k]; }
  [[nodiscard]] std::span<const double> eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] int label(std::size_t k) const { return labels_[k]; }

  /// Indices of the modes whose eigenvalue lies in [lo, hi] (closed bounds
  /// included only when the corresponding flag is set).
  [[nodiscard]] std::vector<std::size_t> modes_in_interval(
      double lo, double hi, bool lo_inclusive = true, bool hi_inclusive = true) const;

  [[nodiscard]] std::vector<std::size_t> kernel_modes() const;

  /// Permutation applied at construction: input index of sorted slot k.
  [[nodiscard]] const std::vector<int>& labels() const { return labels_; }

  bool operator==(const SpectralOperator& other) const {
    return eigenvalues_ == other.eigenvalues_;
  }

 private:
  std::vector<double> eigenvalues_;
  std::vector<int> labels_;
};

/// (A^alpha v)_k = (lambda_k^2)^alpha v_k. alpha = 0 is the identity, also on
/// kernel modes; alpha > 0 annihilates kernel modes.
[[nodiscard]] SpectralVector apply_power(const SpectralOperator& op, double alpha,
                                         const SpectralVector& v);

/// |A^alpha v| computed with compensated accumulation.
[[nodiscard]] double weighted_norm(const SpectralOperator& op, double alpha,
                                   const SpectralVector& v);
[[nodiscard]] double weighted_norm_sq(const SpectralOperator& op, double alpha,
                                      const SpectralVector& v);

/// <u, v> with compensated accumulation.
[[nodiscard]] double dot(const SpectralVector& u, const SpectralVector& v);

/// Initial state (u(0), u'(0)) and the nonlinearity exponent gamma >= 1.
struct InitialData {
  SpectralVector u0;
  SpectralVector u1;
  double gamma = 1.0;

  InitialData(SpectralVector u0_, SpectralVector u1_, double gamma_);
};

/// True when |A^{1/2} u0| > 0, i.e. u0 carries a positive-frequency mode.
/// Solvers accept degenerate data (the flow is then linear); classification
/// and the decay audits require this to hold.
[[nodiscard]] bool is_nondegenerate(const SpectralOperator& op, const InitialData& data);

enum class Regime {
  deteriorated,        ///< nu < mu, or nu == mu with independent components
  improved,            ///< nu > mu, or u1 == 0
  improved_collinear,  ///< nu == mu and v1 parallel to v0
  kernel_only_u1,      ///< u1 != 0 but supported entirely on the kernel
};

[[nodiscard]] std::string to_string(Regime r);

/// Frequency profile of the data: mu/nu are the smallest eigenvalues carrying
/// a nonzero component of u0/u1 (kernel modes excluded), v0/v1 the projections
/// onto those eigenspaces and w0/w1 the strictly-higher-frequency tails.
struct MuNuProfile {
  double mu = 0.0;
  std::optional<double> nu;
  SpectralVector v0, w0;
  SpectralVector v1, w1;
  std::optional<double> delta;  ///< nu/mu, set when nu is present and nu <= mu
  std::optional<double> nu_tail;  ///< lowest frequency strictly above mu carrying u1
  Regime regime = Regime::improved;

  /// Decay-rate exponent used by the audits: nu/mu in the deteriorated
  /// regime, min(2*gamma + 1, nu'/mu) in the improved regimes, where nu' is
  /// the lowest frequency that actually carries u1 above mu.
  [[nodiscard]] double rate_delta(double gamma) const;
};

/// Computes the (mu, nu) profile. Components with |coefficient| <= zero_tol
/// count as zero. Throws RegimeError when u0 has no positive-frequency
/// component.
[[nodiscard]] MuNuProfile classify(const SpectralOperator& op, const InitialData& data,
                                   double zero_tol = 0.0);

/// theta0 = u1 + |A^{1/2} u0|^{2 gamma} A u0, the initial-layer amplitude.
[[nodiscard]] SpectralVector compute_theta0(const SpectralOperator& op,
                                            const InitialData& data);

/// s^gamma with a hard zero below 1e-300, so fully degenerate states yield an
/// exactly vanishing nonlinear coefficient instead of denormal noise.
[[nodiscard]] double nonlinear_coefficient(double s, double gamma);

}  // namespace kirchlab
