#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kirchlab/config.hpp"
#include "kirchlab/errors.hpp"
#include "kirchlab/runner.hpp"
#include "kirchlab/verify.hpp"

namespace {

struct Overrides {
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<double> horizon;
  std::vector<double> ladder;
};

int run_or_sweep(const std::string& config_path, kirchlab::RunMode mode,
                 const Overrides& ov) {
  try {
    auto cfg = kirchlab::load_config(config_path);
    if (ov.out) cfg.out_dir = *ov.out;
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.horizon) cfg.horizon = *ov.horizon;
    if (!ov.ladder.empty()) cfg.ladder = ov.ladder;
    const auto outcome = kirchlab::run_experiment(cfg, mode, std::cout);
    if (!outcome.error.empty()) std::cerr << "error: " << outcome.error << "\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kirchlab::exit_code_for(e);
  }
}

int verify_suite(const std::string& suite, const std::string& out_dir) {
  namespace kv = kirchlab::verify;
  if (!kv::known_suite(suite)) {
    std::cerr << "error: unknown suite '" << suite << "'; known:";
    for (const auto& name : kv::suite_names()) std::cerr << " " << name;
    std::cerr << "\n";
    return 2;
  }
  const auto results = kv::run_suite_results(suite, std::cout);

  nlohmann::json doc;
  doc["suite"] = suite;
  auto criteria = nlohmann::json::array();
  bool all_passed = true;
  for (const auto& r : results) {
    criteria.push_back({{"id", r.id},
                        {"title", r.title},
                        {"passed", r.passed},
                        {"detail", r.detail}});
    all_passed = all_passed && r.passed;
  }
  doc["criteria"] = std::move(criteria);
  doc["passed"] = all_passed;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = std::filesystem::path(out_dir) / ("verify_" + suite + ".json");
  std::ofstream file(path);
  file << doc.dump(2) << "\n";
  if (!file) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return 2;
  }
  std::cout << "verdict " << path.string() << "\n";
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral decay laboratory for the damped degenerate Kirchhoff model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string suite;
  Overrides ov;
  std::string verify_out = "out";

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--out", ov.out, "output directory override");
    cmd->add_option("--threads", ov.threads, "worker pool size override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", ov.horizon, "time horizon override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ladder", ov.ladder, "epsilon ladder override")
        ->delimiter(',');
  };

  auto* run_cmd =
      app.add_subcommand("run", "solve the config's ladder, audit, write CSV + JSON");
  run_cmd->add_option("config", config_path, "experiment config file")->required();
  add_overrides(run_cmd);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "ladder summary only, no per-run artifacts");
  sweep_cmd->add_option("config", config_path, "experiment config file")->required();
  add_overrides(sweep_cmd);

  auto* verify_cmd =
      app.add_subcommand("verify", "run a named acceptance suite");
  verify_cmd->add_option("suite", suite, "suite name, e.g. all")->required();
  verify_cmd->add_option("--out", verify_out, "directory for the verdict JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors share the config-error exit code
  }

  if (app.got_subcommand(run_cmd)) {
    return run_or_sweep(config_path, kirchlab::RunMode::full, ov);
  }
  if (app.got_subcommand(sweep_cmd)) {
    return run_or_sweep(config_path, kirchlab::RunMode::sweep_only, ov);
  }
  return verify_suite(suite, verify_out);
}
