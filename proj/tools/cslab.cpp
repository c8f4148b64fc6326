#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cslab/config.hpp"
#include "cslab/errors.hpp"
#include "cslab/harness.hpp"
#include "cslab/verify.hpp"

using namespace cslab;

int main(int argc, char** argv) {
  CLI::App app{"cslab: contextual search simulator"};
  app.require_subcommand(1);

  std::string config_path, export_path;
  bool allow = false;
  auto* run_cmd = app.add_subcommand("run", "play one configured game");
  run_cmd->add_option("--config", config_path, "config file")->required();
  run_cmd->add_flag("--allow-violations", allow, "exit 0 despite invariant violations");
  run_cmd->add_option("--export-instance", export_path, "write the generated instance as JSON");

  std::string sweep_path, table_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "run many configs, one summary row each");
  sweep_cmd->add_option("--configs", sweep_path, "directory of *.cfg or a file of --- blocks")->required();
  sweep_cmd->add_option("--out", table_path, "summary table (default: stdout)");
  sweep_cmd->add_flag("--allow-violations", allow, "exit 0 despite invariant violations");

  std::string suite;
  std::uint64_t seed = 1;
  int count = 100;
  bool failures_only = false;
  auto* verify_cmd = app.add_subcommand("verify", "property suites on random polytopes");
  verify_cmd->add_option("--suite", suite, "steiner|isoperimetric|cone|cylinder|valuation|splits|all")
      ->required();
  verify_cmd->add_option("--seed", seed, "seed");
  verify_cmd->add_option("--count", count, "polytopes per suite");
  verify_cmd->add_flag("--failures-only", failures_only, "print failing cases only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ExperimentConfig cfg = load_config(config_path);
      if (!export_path.empty()) {
        std::ofstream(export_path) << instance_to_json(cfg.instance, generate(cfg.instance)) << '\n';
      }
      const RunResult r = run(cfg);
      std::cout << summary_json(r.summary, true) << '\n';
      if (!r.ok()) std::cerr << r.summary.status << '\n';
      return exit_code(r.summary, allow || cfg.allow_violations);
    }
    if (*sweep_cmd) {
      const auto configs = load_sweep(sweep_path);
      std::ofstream file;
      if (!table_path.empty()) file.open(table_path, std::ios::binary);
      std::ostream& table = table_path.empty() ? std::cout : file;
      const auto summaries = sweep(configs, table);
      int code = 0;
      for (std::size_t i = 0; i < summaries.size(); ++i)
        code = std::max(code, exit_code(summaries[i], allow || configs[i].allow_violations));
      return code;
    }
    if (*verify_cmd) {
      const VerifyReport rep = verify(suite, seed, count);
      print_report(rep, std::cout, failures_only);
      return rep.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
