#include "kirchlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "kirchlab/errors.hpp"

namespace kirchlab {
namespace {

using nlohmann::json;

bool wants_remainders(const std::vector<std::string>& audits) {
  for (const auto& a : audits) {
    if (a == "theorem_a" || a == "theorem_2_2" || a == "prop_c" || a == "optimality") {
      return true;
    }
  }
  return false;
}

bool wants_g(const std::vector<std::string>& audits) {
  for (const auto& a : audits) {
    if (a == "prop_c") return true;
  }
  return false;
}

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json window_json(const Window& w) {
  return json::array({number_or_null(w.lo), number_or_null(w.hi)});
}

// Echoes the fields that define the experiment. Execution knobs (threads,
// output directory) are left out on purpose: artifacts must be byte-identical
// whenever the experiment itself is identical.
json config_json(const ExperimentConfig& cfg) {
  json j;
  j["eigenvalues"] = cfg.eigenvalues;
  j["u0"] = cfg.u0;
  j["u1"] = cfg.u1;
  j["gamma"] = cfg.gamma;
  j["epsilon"] = cfg.ladder;
  j["horizon"] = cfg.horizon;
  j["samples_per_decade"] = cfg.samples_per_decade;
  j["rel_tol_parabolic"] = cfg.rel_tol_parabolic;
  j["rel_tol_hyperbolic"] = cfg.rel_tol_hyperbolic;
  j["tol_energy"] = cfg.tol_energy;
  j["regime"] = cfg.regime;
  j["audits"] = cfg.audits;
  j["lower_floor"] = cfg.lower_floor;
  j["slack"] = cfg.slack;
  return j;
}

json profile_json(const MuNuProfile& p) {
  json j;
  j["mu"] = p.mu;
  j["nu"] = p.nu ? json(*p.nu) : json(nullptr);
  j["delta"] = p.delta ? json(*p.delta) : json(nullptr);
  j["regime"] = to_string(p.regime);
  return j;
}

json stats_json(const ode::Stats& s) {
  json j;
  j["accepted"] = s.accepted;
  j["rejected"] = s.rejected;
  j["rhs_evals"] = s.rhs_evals;
  j["jacobian_evals"] = s.jacobian_evals;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> csv_columns(const std::vector<std::string>& audits) {
  std::vector<std::string> cols{"t",     "norm2_Ahalf_u", "c",      "C",
                                "norm2_Ahalf_u_eps", "c_eps", "C_eps", "energy"};
  if (wants_remainders(audits)) {
    cols.insert(cols.end(), {"norm2_rho", "norm2_Ahalf_rho", "norm2_A_rho",
                             "norm2_r_prime", "norm2_Ahalf_r_prime"});
  }
  if (wants_g(audits)) {
    cols.insert(cols.end(), {"norm2_g", "norm2_Ahalf_g"});
  }
  return cols;
}

std::string run_csv(const RunResult& run, const std::vector<std::string>& audits) {
  const bool with_rem = wants_remainders(audits);
  const bool with_g = wants_g(audits);
  if (with_rem && !run.has_remainders) {
    throw Error("run_csv: remainder columns requested but not computed");
  }
  if (with_g && !run.has_g) {
    throw Error("run_csv: forcing-term columns requested but not computed");
  }

  const auto cols = csv_columns(audits);
  std::ostringstream out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << ',';
    out << cols[i];
  }
  out << '\n';

  const std::size_t n = run.par.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row{run.par.times[i],
                            weighted_norm_sq(run.par.op, 0.5, run.par.u[i]),
                            run.par.c[i],
                            run.par.C[i],
                            weighted_norm_sq(run.hyp.op, 0.5, run.hyp.u[i]),
                            run.hyp.c[i],
                            run.hyp.C[i],
                            run.hyp.energy[i]};
    if (with_rem) {
      row.insert(row.end(),
                 {run.rem.rho_sq[i], run.rem.rho_half_sq[i], run.rem.rho_full_sq[i],
                  run.rem.r_prime_sq[i], run.rem.r_prime_half_sq[i]});
    }
    if (with_g) {
      row.insert(row.end(), {run.g.g_sq[i], run.g.g_half_sq[i]});
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
  return out.str();
}

std::string run_report_json(const ExperimentConfig& config, const RunResult& run) {
  json j;
  j["config_echo"] = config_json(config);
  j["epsilon"] = run.epsilon;
  j["profile"] = profile_json(run.profile);

  json entries = json::array();
  for (const auto& report : run.reports) {
    for (const auto& e : report.entries) {
      json je;
      je["report"] = report.title;
      je["name"] = e.name;
      je["paper_ref"] = e.ref;
      je["constant"] = number_or_null(e.constant);
      je["window"] = window_json(e.window);
      je["verdict"] = e.verdict;
      entries.push_back(je);
    }
  }
  j["entries"] = entries;

  json fits = json::array();
  for (std::size_t i = 0; i < run.fits.size(); ++i) {
    json jf;
    jf["quantity"] = run.fit_names[i];
    jf["exponent"] = run.fits[i].exponent;
    jf["residual"] = run.fits[i].rms_residual;
    jf["window"] = window_json(run.fits[i].window);
    fits.push_back(jf);
  }
  j["fits"] = fits;

  j["statistic"] = number_or_null(run.statistic);
  j["solver_stats"] = {{"parabolic", stats_json(run.par.stats)},
                       {"hyperbolic", stats_json(run.hyp.stats)}};
  return j.dump(2) + "\n";
}

std::string ladder_summary_json(const ExperimentConfig& config,
                                const LadderSummary& summary) {
  json j;
  j["config_echo"] = config_json(config);
  j["epsilons"] = summary.epsilons;

  json stats = json::array();
  for (const double s : summary.statistics) stats.push_back(number_or_null(s));
  j["statistic"] = {{"name", "sup (1+t)^{rate/gamma} |rho|^2"}, {"values", stats}};

  if (summary.slope) {
    json js;
    js["exponent"] = summary.slope->exponent;
    js["intercept"] = summary.slope->intercept;
    js["residual"] = summary.slope->rms_residual;
    js["window"] = window_json(summary.slope->window);
    j["slope"] = js;
  } else {
    j["slope"] = nullptr;
  }

  json stab = json::array();
  for (const auto& s : summary.stability) {
    stab.push_back({{"entry", s.entry}, {"factor", number_or_null(s.factor)}});
  }
  j["stability"] = stab;
  j["verdict"] = summary.all_passed ? "pass" : "fail";
  return j.dump(2) + "\n";
}

}  // namespace kirchlab
