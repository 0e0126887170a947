#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wimaxqoe/cli.hpp"

namespace {

void add_common(CLI::App* cmd, wimaxqoe::cli::Options& opt, std::string& mode) {
  cmd->add_option("--config", opt.config_path, "Scenario file (JSON)");
  cmd->add_option("--mode", mode, "Controller mode")->check(CLI::IsMember({"baseline", "qoe"}));
  cmd->add_option("--seed", opt.seed, "RNG seed");
  cmd->add_option("--duration", opt.duration_s, "Simulated time in seconds");
  cmd->add_option("--out-report", opt.out_report, "CSV report path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = wimaxqoe::cli;

  CLI::App app{"WiMAX uplink UGS simulator with a QoE rate controller"};
  app.require_subcommand(1);

  cli::Options run_opt, cmp_opt, an_opt;
  std::string run_mode, cmp_mode, an_mode;

  auto* run = app.add_subcommand("run", "Run one simulation and report per-flow metrics");
  add_common(run, run_opt, run_mode);
  run->add_option("--out-trace", run_opt.out_trace, "Write the packet trace here");

  auto* cmp = app.add_subcommand("compare", "Run baseline and QoE modes side by side");
  add_common(cmp, cmp_opt, cmp_mode);
  cmp->add_option("--out-trace", cmp_opt.out_trace,
                  "Trace path prefix; writes <path>.baseline and <path>.qoe");

  auto* an = app.add_subcommand("analyze", "Recompute per-flow metrics from a trace file");
  add_common(an, an_opt, an_mode);
  an->add_option("trace", an_opt.trace_input, "Trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  auto apply_mode = [](const std::string& m, cli::Options& o) {
    if (!m.empty()) o.mode = wimaxqoe::parse_controller_mode(m);
  };

  if (run->parsed()) {
    apply_mode(run_mode, run_opt);
    return cli::run_command(run_opt, std::cout, std::cerr);
  }
  if (cmp->parsed()) {
    apply_mode(cmp_mode, cmp_opt);
    return cli::compare_command(cmp_opt, std::cout, std::cerr);
  }
  apply_mode(an_mode, an_opt);
  return cli::analyze_command(an_opt, std::cout, std::cerr);
}
