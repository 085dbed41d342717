#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kirchlab/audit.hpp"
#include "kirchlab/config.hpp"
#include "kirchlab/errors.hpp"
#include "kirchlab/grid.hpp"
#include "kirchlab/report.hpp"

using namespace kirchlab;
using nlohmann::json;

namespace {

RunResult make_run(const std::vector<std::string>& audits) {
  const SpectralOperator op({1.0, 2.0});
  const InitialData data({0.0, 1.0}, {1.0, 0.0}, 1.0);
  const double eps = 1e-2;
  GridSpec spec;
  spec.horizon = 10.0;
  spec.epsilon = eps;
  const auto grid = make_sample_grid(spec);

  RunResult run;
  run.epsilon = eps;
  run.profile = classify(op, data);
  run.par = solve_profile(op, data, grid);
  run.hyp = solve_hyperbolic(op, data, eps, grid, 1e-9);
  run.rem = build_remainders(run.hyp, run.par, compute_theta0(op, data), &run.profile);
  run.has_remainders = true;
  run.g = compute_g(run.par, run.hyp);
  run.has_g = true;
  run.statistic = sup_weighted_rho(run.rem, 0.5);
  for (const auto& audit : audits) {
    if (audit == "theorem_a") {
      run.reports.push_back(audit_theorem_A(run.par, run.hyp, run.rem, 0.5));
    } else if (audit == "theorem_2_2") {
      run.reports.push_back(audit_theorem_2_2(run.rem, run.profile));
    }
  }
  run.fit_names.push_back("norm2_Ahalf_u");
  run.fits.push_back(RateFit{-1.0, 0.1, 1e-3, Window{1.0, 10.0}});
  return run;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("format_double round-trips exactly") {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 12345.6789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("column set depends only on the audit list") {
  const std::vector<std::string> base{"t",     "norm2_Ahalf_u", "c",      "C",
                                      "norm2_Ahalf_u_eps", "c_eps", "C_eps", "energy"};
  CHECK(csv_columns({}) == base);
  CHECK(csv_columns({"prop31_b"}) == base);

  auto with_rem = base;
  with_rem.insert(with_rem.end(), {"norm2_rho", "norm2_Ahalf_rho", "norm2_A_rho",
                                   "norm2_r_prime", "norm2_Ahalf_r_prime"});
  CHECK(csv_columns({"theorem_a"}) == with_rem);
  CHECK(csv_columns({"theorem_2_2"}) == with_rem);
  CHECK(csv_columns({"optimality", "theorem_a"}) == with_rem);

  auto with_g = with_rem;
  with_g.insert(with_g.end(), {"norm2_g", "norm2_Ahalf_g"});
  CHECK(csv_columns({"prop_c"}) == with_g);
  CHECK(csv_columns({"theorem_a", "prop_c"}) == csv_columns({"prop_c", "theorem_a"}));
}

TEST_CASE("run_csv emits one parseable row per sample") {
  const std::vector<std::string> audits{"theorem_a"};
  const auto run = make_run(audits);
  const auto csv = run_csv(run, audits);

  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto cols = csv_columns(audits);
  const auto header = split_csv(line);
  REQUIRE(header.size() == cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) CHECK(header[i] == cols[i]);

  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    REQUIRE(cells.size() == cols.size());
    for (const auto& cell : cells) {
      const double v = std::stod(cell);
      CHECK(std::isfinite(v));
    }
    if (rows == 0) {
      CHECK(std::stod(cells[0]) == 0.0);
      // The weighted norm of the initial state is exactly mu = 2.
      CHECK(std::stod(cells[1]) == 2.0);
    }
    ++rows;
  }
  CHECK(rows == run.par.times.size());
}

TEST_CASE("run_csv refuses columns that were never computed") {
  const std::vector<std::string> audits{"theorem_a"};
  auto run = make_run({});
  run.has_remainders = false;
  CHECK_THROWS_AS((void)run_csv(run, audits), Error);
  run.has_remainders = true;
  run.has_g = false;
  CHECK_THROWS_AS((void)run_csv(run, {"prop_c"}), Error);
}

TEST_CASE("per-run JSON exposes the audit catalog verbatim") {
  const std::vector<std::string> audits{"theorem_a", "theorem_2_2"};
  const auto run = make_run(audits);
  auto cfg = parse_config(
      "[operator]\neigenvalues = 1, 2\n[data]\nu0 = 0, 1\nu1 = 1, 0\n"
      "[run]\nepsilon = 1e-2\n[audits]\nrun = theorem_a theorem_2_2\n");
  const auto doc = json::parse(run_report_json(cfg, run));

  CHECK(doc.at("epsilon") == 1e-2);
  CHECK(doc.at("config_echo").is_object());
  const auto& profile = doc.at("profile");
  CHECK(profile.at("mu") == 2.0);
  CHECK(profile.at("nu") == 1.0);
  CHECK(profile.at("delta") == 0.5);
  CHECK(profile.at("regime") == "deteriorated");

  const auto& entries = doc.at("entries");
  REQUIRE(entries.is_array());
  REQUIRE(!entries.empty());
  bool saw_2_2 = false;
  for (const auto& e : entries) {
    CHECK(e.contains("name"));
    CHECK(e.contains("paper_ref"));
    CHECK(e.contains("constant"));
    CHECK(e.contains("window"));
    CHECK(e.contains("verdict"));
    if (e.at("name") == "2.2(1) sup") {
      saw_2_2 = true;
      CHECK(e.at("paper_ref") == "Theorem 2.2 (1)");
    }
  }
  CHECK(saw_2_2);

  const auto& fits = doc.at("fits");
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].at("quantity") == "norm2_Ahalf_u");
  CHECK(fits[0].at("exponent") == -1.0);
  CHECK(doc.at("statistic").is_number());
  CHECK(doc.at("solver_stats").at("hyperbolic").is_object());
}

TEST_CASE("ladder summary JSON carries slope, stability, verdict") {
  auto cfg = parse_config(
      "[operator]\neigenvalues = 1\n[data]\nu0 = 1\n[run]\nepsilon = 1e-2 1e-3\n");
  LadderSummary summary;
  summary.epsilons = {1e-2, 1e-3};
  summary.statistics = {4.0, 3.5};
  summary.stability.push_back({"2.2(1) sup", 1.25});
  summary.all_passed = true;

  auto doc = json::parse(ladder_summary_json(cfg, summary));
  CHECK(doc.at("epsilons") == json::array({1e-2, 1e-3}));
  CHECK(doc.at("statistic").at("values").size() == 2);
  CHECK(doc.at("slope").is_null());  // two rungs are too few for a fit
  REQUIRE(doc.at("stability").size() == 1);
  CHECK(doc.at("stability")[0].at("entry") == "2.2(1) sup");
  CHECK(doc.at("stability")[0].at("factor") == 1.25);
  CHECK(doc.at("verdict") == "pass");

  summary.slope = RateFit{2.0, 1.0, 1e-2, Window{1e-3, 1e-2}};
  summary.all_passed = false;
  doc = json::parse(ladder_summary_json(cfg, summary));
  CHECK(doc.at("slope").at("exponent") == 2.0);
  CHECK(doc.at("verdict") == "fail");
}

TEST_CASE("non-finite numbers serialize as null") {
  auto run = make_run({});
  run.statistic = std::numeric_limits<double>::quiet_NaN();
  auto cfg = parse_config(
      "[operator]\neigenvalues = 1, 2\n[data]\nu0 = 0, 1\nu1 = 1, 0\n"
      "[run]\nepsilon = 1e-2\n");
  const auto doc = json::parse(run_report_json(cfg, run));
  CHECK(doc.at("statistic").is_null());
}

}  // TEST_SUITE
