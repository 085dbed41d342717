#include "kirchlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "kirchlab/audit.hpp"
#include "kirchlab/errors.hpp"
#include "kirchlab/grid.hpp"
#include "kirchlab/heuristic.hpp"
#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/parabolic.hpp"
#include "kirchlab/remainder.hpp"
#include "kirchlab/spectral.hpp"

namespace kirchlab::verify {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

/// One fully solved configuration: limit problem, perturbed problem and the
/// remainders between them on a shared grid.
struct Bundle {
  SpectralOperator op;
  MuNuProfile profile;
  ParabolicTrajectory par;
  HyperbolicTrajectory hyp;
  RemainderSeries rem;
  double build_seconds = 0.0;  ///< wall time of the two solves
};

Bundle make_bundle(std::vector<double> eigenvalues, SpectralVector u0,
                   SpectralVector u1, double epsilon, double horizon) {
  const auto t0 = Clock::now();
  Bundle b;
  b.op = SpectralOperator(std::move(eigenvalues));
  const InitialData data(std::move(u0), std::move(u1), 1.0);
  b.profile = classify(b.op, data);

  GridSpec spec;
  spec.horizon = horizon;
  spec.epsilon = epsilon;
  if (b.profile.delta) spec.t_star = std::pow(epsilon, -*b.profile.delta);
  const auto grid = make_sample_grid(spec);

  b.par = solve_profile(b.op, data, grid, 1e-10);
  HyperbolicOptions opt;
  opt.rel_tol = 1e-9;
  b.hyp = solve_hyperbolic(b.op, data, epsilon, grid, opt);
  b.rem = build_remainders(b.hyp, b.par, compute_theta0(b.op, data), &b.profile);
  b.build_seconds = seconds_since(t0);
  return b;
}

/// Memoized solver runs shared by the criteria of one suite invocation, so
/// e.g. the energy and monotonicity sweeps reuse the ladder runs instead of
/// solving everything twice. Build times are recorded per configuration, so
/// runtime budgets charge the criterion that owns the runs no matter which
/// criterion happened to trigger them first.
class Lab {
 public:
  /// Coercive two-mode data exciting both frequencies.
  const Bundle& band() {
    return cached("band", [] {
      return make_bundle({1.0, 4.0}, {1.0, 1.0}, {1.0, 1.0}, 1e-3, 1e4);
    });
  }

  /// u0 on the higher frequency, u1 on the lower one: the slow beats carried
  /// by u1 deteriorate the remainder rate to (1+t)^{-1/2}.
  const Bundle& deteriorated(double epsilon, double horizon) {
    return cached("det:" + fmt(epsilon) + "@" + fmt(horizon), [=] {
      return make_bundle({1.0, 2.0}, {0.0, 1.0}, {1.0, 0.0}, epsilon, horizon);
    });
  }

  /// u1 strictly above u0 in frequency: remainder decays at the improved rate.
  const Bundle& improved(double epsilon) {
    return cached("imp:" + fmt(epsilon), [=] {
      return make_bundle({1.0, 2.0}, {1.0, 0.0}, {0.0, 1.0}, epsilon, 1e3);
    });
  }

  /// Pure kernel mode; the limit problem is trivial so only the perturbed
  /// trajectory exists (no profile, the data carries no positive frequency).
  const HyperbolicTrajectory& kernel() {
    if (!kernel_) {
      const SpectralOperator op({0.0});
      const InitialData data(SpectralVector{1.0}, SpectralVector{1.0}, 1.0);
      GridSpec spec;
      spec.horizon = 10.0;
      spec.epsilon = 1e-2;
      HyperbolicOptions opt;
      opt.rel_tol = 1e-9;
      kernel_ = std::make_unique<HyperbolicTrajectory>(
          solve_hyperbolic(op, data, 1e-2, make_sample_grid(spec), opt));
    }
    return *kernel_;
  }

  /// Every perturbed trajectory the decay and remainder criteria run on.
  std::vector<const Bundle*> decay_pool() {
    std::vector<const Bundle*> pool;
    pool.push_back(&band());
    for (double eps : {1e-2, 3e-3, 1e-3, 1e-4}) pool.push_back(&deteriorated(eps, 1e4));
    pool.push_back(&deteriorated(1e-6, 1e3));
    for (double eps : {1e-2, 3e-3, 1e-3}) pool.push_back(&improved(eps));
    return pool;
  }

 private:
  template <class F>
  const Bundle& cached(const std::string& key, F&& build) {
    auto it = bundles_.find(key);
    if (it == bundles_.end()) it = bundles_.emplace(key, build()).first;
    return it->second;
  }

  std::map<std::string, Bundle> bundles_;
  std::unique_ptr<HyperbolicTrajectory> kernel_;
};

CriterionResult c1_parabolic_oracles() {
  CriterionResult r{"C1", "profile reduction vs direct parabolic solve", false, ""};
  const auto t0 = Clock::now();
  const SpectralOperator op({1.0, 4.0});
  const InitialData data(SpectralVector{1.0, 1.0}, SpectralVector{0.0, 0.0}, 1.0);
  GridSpec spec;
  spec.horizon = 1e4;
  const auto grid = make_sample_grid(spec);
  const auto profile = solve_profile(op, data, grid, 1e-9);
  const auto direct = solve_direct(op, data, grid, 1e-9);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = weighted_norm(op, 0.5, profile.u[i]);
    const double b = weighted_norm(op, 0.5, direct.u[i]);
    worst = std::max(worst, std::abs(a - b) / std::max(a, b));
  }
  const double elapsed = seconds_since(t0);
  r.passed = std::isfinite(worst) && worst <= 1e-6 && elapsed < 5.0;
  r.detail = "max rel disagreement of |A^{1/2}u| " + fmt(worst) +
             " (tol 1e-6) over " + std::to_string(grid.size()) + " samples, " +
             fmt(elapsed) + " s (budget 5 s)";
  return r;
}

CriterionResult c2_corrector_oracle() {
  CriterionResult r{"C2", "corrector closed form vs integrated oracle", false, ""};
  const SpectralVector theta0{1.0};
  const double eps = 1e-3;
  GridSpec spec;
  spec.horizon = 10.0;
  spec.epsilon = eps;
  const auto grid = make_sample_grid(spec);
  const auto oracle = corrector_oracle(theta0, eps, grid, 1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto closed = corrector(theta0, eps, grid[i]);
    for (std::size_t k = 0; k < theta0.size(); ++k) {
      worst = std::max(worst, std::abs(closed.value.coeffs[k] -
                                       oracle.value[i].coeffs[k]));
      worst = std::max(worst, std::abs(closed.derivative.coeffs[k] -
                                       oracle.derivative[i].coeffs[k]));
    }
  }
  r.passed = std::isfinite(worst) && worst <= 1e-10;
  r.detail = "max abs error " + fmt(worst) + " (tol 1e-10) over " +
             std::to_string(grid.size()) + " samples, value and derivative";
  return r;
}

CriterionResult c3_kernel_mode(Lab& lab) {
  CriterionResult r{"C3", "kernel-mode closed form", false, ""};
  const auto& traj = lab.kernel();
  const double eps = traj.epsilon;
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const double exact = 1.0 + eps * (1.0 - std::exp(-t / eps));
    worst = std::max(worst, std::abs(traj.u[i].coeffs[0] - exact));
  }
  r.passed = std::isfinite(worst) && worst <= 1e-8;
  r.detail = "max abs error " + fmt(worst) + " (tol 1e-8) on [0, 10], eps " + fmt(eps);
  return r;
}

CriterionResult c4_energy_dissipation(Lab& lab) {
  CriterionResult r{"C4", "energy dissipation at every sample", false, ""};
  std::vector<const HyperbolicTrajectory*> runs;
  runs.push_back(&lab.kernel());
  for (const Bundle* b : lab.decay_pool()) runs.push_back(&b->hyp);

  std::size_t violations = 0;
  std::size_t samples = 0;
  double worst = -kInf;  // largest inter-sample growth relative to energy(0)
  for (const auto* traj : runs) {
    const double e0 = traj->energy.front();
    for (std::size_t i = 1; i < traj->energy.size(); ++i) {
      const double growth = (traj->energy[i] - traj->energy[i - 1]) / e0;
      worst = std::max(worst, growth);
      if (growth > 1e-9) ++violations;
    }
    samples += traj->energy.size();
  }
  r.passed = violations == 0;
  r.detail = std::to_string(runs.size()) + " runs, " + std::to_string(samples) +
             " samples, worst step growth " + fmt(worst) +
             "*E(0) (tol 1e-9), violations " + std::to_string(violations);
  return r;
}

CriterionResult c5_decay_band(Lab& lab) {
  CriterionResult r{"C5", "two-sided perturbed decay band", false, ""};
  const Bundle& b = lab.band();
  double lo = kInf;
  double hi = 0.0;
  for (std::size_t i = 0; i < b.hyp.times.size(); ++i) {
    const double t = b.hyp.times[i];
    if (t < 1.0 || t > 1e4) continue;
    const double w = (1.0 + t) * weighted_norm_sq(b.op, 0.5, b.hyp.u[i]);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  r.passed = lo > 0.0 && std::isfinite(hi);
  r.detail = "(1+t)|A^{1/2}u_eps|^2 in [" + fmt(lo) + ", " + fmt(hi) +
             "] on [1, 1e4], eps " + fmt(b.hyp.epsilon);
  return r;
}

CriterionResult c6_convergence_ladder(Lab& lab) {
  CriterionResult r{"C6", "remainder convergence ladder", false, ""};
  const std::vector<double> ladder{1e-2, 3e-3, 1e-3};
  double build = 0.0;
  double analysis = 0.0;
  std::vector<double> stats;
  std::map<std::string, std::pair<double, double>> ranges;
  for (double eps : ladder) {
    const Bundle& b = lab.deteriorated(eps, 1e4);
    build += b.build_seconds;
    const auto ta = Clock::now();
    stats.push_back(sup_weighted_rho(b.rem, b.profile.rate_delta(b.hyp.gamma)));
    const AuditReport rep = audit_theorem_2_2(b.rem, b.profile);
    for (const auto& e : rep.entries) {
      auto [it, fresh] = ranges.emplace(e.name, std::make_pair(e.constant, e.constant));
      if (!fresh) {
        it->second.first = std::min(it->second.first, e.constant);
        it->second.second = std::max(it->second.second, e.constant);
      }
    }
    analysis += seconds_since(ta);
  }
  const auto ta = Clock::now();
  const RateFit slope = sweep_convergence(ladder, stats);
  double worst_ratio = 1.0;
  for (const auto& [name, range] : ranges) {
    if (range.first > 0.0 && std::isfinite(range.second)) {
      worst_ratio = std::max(worst_ratio, range.second / range.first);
    } else {
      worst_ratio = kInf;
    }
  }
  analysis += seconds_since(ta);
  const double elapsed = build + analysis;

  const bool slope_ok = std::abs(slope.exponent - 2.0) <= 0.15;
  const bool stable = worst_ratio <= 3.0;
  r.passed = slope_ok && stable && elapsed < 120.0;
  r.detail = "slope " + fmt(slope.exponent) + " (target 2 +- 0.15), constants stable x" +
             fmt(worst_ratio) + " (limit 3) over " + std::to_string(ranges.size()) +
             " entries, " + fmt(elapsed) + " s (budget 120 s)";
  return r;
}

CriterionResult c7_lower_bound(Lab& lab) {
  CriterionResult r{"C7", "weighted remainder lower bound", false, ""};
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4};
  const double floor = AuditOptions{}.lower_floor;
  std::vector<double> stats;
  for (double eps : ladder) {
    const Bundle& b = lab.deteriorated(eps, 1e4);
    stats.push_back(optimality_statistic(b.rem, b.profile) / (eps * eps));
  }
  const auto [lo, hi] = std::minmax_element(stats.begin(), stats.end());
  const bool finite = std::isfinite(*hi);
  r.passed = finite && *lo >= floor && *hi / *lo <= 3.0;
  r.detail = "max (1+t)^{1/2}|rho|^2 / eps^2 in [" + fmt(*lo) + ", " + fmt(*hi) +
             "] (floor " + fmt(floor) + "), spread x" + fmt(*hi / *lo) + " (limit 3)";
  return r;
}

CriterionResult c8_rate_sharpness(Lab& lab) {
  CriterionResult r{"C8", "deteriorated-rate sharpness", false, ""};
  const Bundle& b = lab.deteriorated(1e-6, 1e3);
  const Window window{10.0, 0.5 * std::pow(b.hyp.epsilon, -0.5)};
  const RateFit fit = fit_rate(b.rem.times, b.rem.rho_sq, window);
  r.passed = std::abs(fit.exponent + 0.5) <= 0.1;
  r.detail = "|rho|^2 exponent " + fmt(fit.exponent) + " (target -0.5 +- 0.1) on [" +
             fmt(window.lo) + ", " + fmt(window.hi) + "], eps " + fmt(b.hyp.epsilon);
  return r;
}

CriterionResult c9_improved_regime(Lab& lab) {
  CriterionResult r{"C9", "improved-regime remainder rate", false, ""};
  const std::vector<double> ladder{1e-2, 3e-3, 1e-3};
  std::vector<double> stats;
  double rate = 0.0;
  for (double eps : ladder) {
    const Bundle& b = lab.improved(eps);
    rate = b.profile.rate_delta(b.hyp.gamma);
    stats.push_back(sup_weighted_rho(b.rem, rate) / (eps * eps));
  }
  const auto [lo, hi] = std::minmax_element(stats.begin(), stats.end());
  const bool finite = *lo > 0.0 && std::isfinite(*hi);
  r.passed = finite && *hi / *lo <= 5.0;
  r.detail = "sup (1+t)^" + fmt(rate) + "|rho|^2 / eps^2 in [" + fmt(*lo) + ", " +
             fmt(*hi) + "], spread x" + fmt(finite ? *hi / *lo : kInf) + " (limit 5)";
  return r;
}

CriterionResult c10_toy_comparison() {
  CriterionResult r{"C10", "toy model comparison bound", false, ""};
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4};
  const AuditReport rep = verify_lemma_3_2(0.5, 1.0, 1.0, ladder, 1e-10);

  double worst_margin = kInf;
  std::size_t margin_count = 0;
  std::vector<double> endpoint;  // rescaled psi at t = eps^{-delta}, per rung
  for (const auto& e : rep.entries) {
    if (e.name.starts_with("psi vs z")) {
      worst_margin = std::min(worst_margin, e.constant);
      ++margin_count;
    }
    if (e.name.starts_with("M28, ")) endpoint.push_back(e.constant);
  }
  const auto [m_lo, m_hi] = std::minmax_element(endpoint.begin(), endpoint.end());
  const bool margins_ok = margin_count == ladder.size() && worst_margin >= -1e-8;
  const bool stable =
      endpoint.size() == ladder.size() && *m_lo > 0.0 && *m_hi / *m_lo <= 2.0;

  // Slow component of the pair system against its predicted profile.
  double band_lo = kInf;
  double band_hi = 0.0;
  for (double eps : ladder) {
    const double horizon = 0.5 * std::pow(eps, -0.5);
    GridSpec spec;
    spec.horizon = horizon;
    const ToyRun run = solve_toy(1.0, 0.5, 1.0, eps, make_sample_grid(spec), 1e-10);
    const ToyBand tb = toy_remainder_band(run, 1.0, horizon);
    band_lo = std::min(band_lo, tb.lo);
    band_hi = std::max(band_hi, tb.hi);
  }
  const bool band_ok = band_lo > 0.0 && std::isfinite(band_hi);

  r.passed = margins_ok && stable && band_ok;
  r.detail = "worst psi-z margin " + fmt(worst_margin) + " (tol -1e-8), endpoint stable x" +
             fmt(endpoint.empty() ? kInf : *m_hi / *m_lo) + " (limit 2), band [" +
             fmt(band_lo) + ", " + fmt(band_hi) + "] on [1, eps^{-1/2}/2]";
  return r;
}

CriterionResult c11_monotonicity(Lab& lab) {
  CriterionResult r{"C11", "monotonicity inequality", false, ""};
  std::size_t violations = 0;
  std::size_t samples = 0;
  double worst = 0.0;
  for (const Bundle* b : lab.decay_pool()) {
    const MonotonicityCheck mc = check_monotonicity(b->hyp, b->par, 1e-12);
    violations += mc.violations;
    worst = std::min(worst, mc.worst_margin);
    samples += b->hyp.times.size();
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " violations (slack 1e-12*scale) over " +
             std::to_string(samples) + " samples, worst margin " + fmt(worst);
  return r;
}

CriterionResult run_criterion(int id, Lab& lab) {
  try {
    switch (id) {
      case 1: return c1_parabolic_oracles();
      case 2: return c2_corrector_oracle();
      case 3: return c3_kernel_mode(lab);
      case 4: return c4_energy_dissipation(lab);
      case 5: return c5_decay_band(lab);
      case 6: return c6_convergence_ladder(lab);
      case 7: return c7_lower_bound(lab);
      case 8: return c8_rate_sharpness(lab);
      case 9: return c9_improved_regime(lab);
      case 10: return c10_toy_comparison();
      case 11: return c11_monotonicity(lab);
      default: throw Error("no criterion " + std::to_string(id));
    }
  } catch (const std::exception& ex) {
    // A criterion that cannot even produce its statistic fails loudly but
    // must not prevent the remaining criteria from reporting.
    return {"C" + std::to_string(id), "criterion aborted", false,
            std::string("exception: ") + ex.what()};
  }
}

const std::vector<std::pair<std::string, std::vector<int>>>& suite_table() {
  static const std::vector<std::pair<std::string, std::vector<int>>> table{
      {"parabolic", {1}},
      {"corrector", {2}},
      {"kernel", {3}},
      {"energy", {4}},
      {"decay", {5}},
      {"convergence", {6}},
      {"optimality", {7}},
      {"sharpness", {8}},
      {"improved", {9}},
      {"toy", {10}},
      {"monotonicity", {11}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, ids] : suite_table()) out.push_back(name);
    return out;
  }();
  return names;
}

bool known_suite(const std::string& name) {
  for (const auto& [known, ids] : suite_table()) {
    if (known == name) return true;
  }
  return false;
}

std::vector<CriterionResult> run_suite_results(const std::string& name,
                                               std::ostream& out) {
  const std::vector<int>* ids = nullptr;
  for (const auto& [known, criteria] : suite_table()) {
    if (known == name) {
      ids = &criteria;
      break;
    }
  }
  if (ids == nullptr) throw ConfigError("unknown acceptance suite: " + name);

  Lab lab;
  std::vector<CriterionResult> results;
  for (int id : *ids) {
    results.push_back(run_criterion(id, lab));
    const auto& r = results.back();
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.title << ": "
        << r.detail << "\n";
    out.flush();
  }
  return results;
}

int run_suite(const std::string& name, std::ostream& out) {
  if (!known_suite(name)) {
    out << "unknown suite '" << name << "'; known:";
    for (const auto& s : suite_names()) out << " " << s;
    out << "\n";
    return 2;
  }
  const auto results = run_suite_results(name, out);
  for (const auto& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}

}  // namespace kirchlab::verify
