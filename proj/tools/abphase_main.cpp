// abphase: scenario runner and acceptance check.
//
//   abphase run <scenario.json> [--out DIR] [--tol X] [--seed-free]
//   abphase verify-paper [--quiet]
//
// Exit codes: 0 ok, 1 failed expectation or invariant, 2 scenario/schema
// error, 3 geometry or contract error, 4 non-convergence.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "abphase/cli/runner.hpp"
#include "abphase/cli/scenario.hpp"
#include "abphase/verification.hpp"

namespace {

int cmd_run(const std::string& file, const abphase::cli::RunOptions& opts) {
  using namespace abphase::cli;
  Scenario sc;
  try {
    sc = load_scenario(file);
  } catch (const abphase::SchemaError& e) {
    std::cerr << "abphase: scenario error at " << e.what() << "\n";
    return kExitSchema;
  }
  if (opts.rel_tol && !(*opts.rel_tol > 0.0)) {
    std::cerr << "abphase: --tol must be > 0\n";
    return kExitSchema;
  }
  const RunOutcome out = run_scenario(std::move(sc), opts);
  std::cout << "wrote " << out.results_file.string() << " (exit " << out.exit_code << ")\n";
  return out.exit_code;
}

int cmd_verify(bool quiet) {
  const auto results = abphase::verification::run_all();
  int failed = 0;
  std::printf("%-4s  %-3s  %s\n", "", "#", "criterion");
  for (const auto& c : results) {
    std::printf("%-4s  %-3d  %s\n", c.passed ? "PASS" : "FAIL", c.id, c.title.c_str());
    if (!quiet || !c.passed) {
      for (const auto& d : c.details) std::printf("           %s\n", d.c_str());
    }
    if (!c.passed) ++failed;
  }
  std::printf("%d/%zu passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? abphase::cli::kExitOk : abphase::cli::kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abphase: Aharonov-Bohm phase and interaction-energy scenarios"};
  app.set_version_flag("--version", std::string(ABPHASE_VERSION));
  app.require_subcommand(1);

  std::string file;
  std::string out_dir;
  double tol = 0.0;
  bool seed_free = false;
  auto* run = app.add_subcommand("run", "Execute a scenario file");
  run->add_option("scenario", file, "Scenario JSON file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  auto* tol_opt = run->add_option("--tol", tol, "Override quad.rel_tol");
  run->add_flag("--seed-free", seed_free, "Omit the timestamp block so output is byte-identical");

  bool quiet = false;
  auto* verify = app.add_subcommand("verify-paper", "Run the bundled acceptance checks");
  verify->add_flag("--quiet", quiet, "Only list details of failing checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : abphase::cli::kExitSchema;
  }

  try {
    if (*run) {
      abphase::cli::RunOptions opts;
      if (*out_opt) opts.out_dir = out_dir;
      if (*tol_opt) opts.rel_tol = tol;
      opts.seed_free = seed_free;
      opts.threads = abphase::cli::threads_from_env();
      return cmd_run(file, opts);
    }
    return cmd_verify(quiet);
  } catch (const abphase::ContractError& e) {
    std::cerr << "abphase: " << e.what() << "\n";
    return abphase::cli::kExitGeometry;
  } catch (const std::exception& e) {
    std::cerr << "abphase: " << e.what() << "\n";
    return abphase::cli::kExitAssertion;
  }
}
