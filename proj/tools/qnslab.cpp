#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qns/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qnslab: periodic quantum Navier-Stokes simulator and verification lab"};
  app.require_subcommand(1);

  qns::CliOptions opts;
  std::string config, out, mode;
  int threads = 0;

  auto add_common = [&](CLI::App* sub, const char* config_help) {
    sub->add_option("--config", config, config_help);
    sub->add_option("--out", out, "output directory (overrides config and QNSLAB_OUT)");
    sub->add_option("--mode", mode, "parameter mode")->check(CLI::IsMember({"paper", "desk"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "integrate one configuration");
  add_common(run, "run config (JSON)");
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, "suite config (JSON); default runs all suites");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over a run config");
  add_common(sweep, "run config with a sweep section");
  auto* report = app.add_subcommand("report", "summarize monitor CSV output");
  add_common(report, "monitor CSV or directory of runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qns::kExitOk : qns::kExitConfigError;
  }

  if (!config.empty()) opts.config = config;
  if (!out.empty()) opts.out = out;
  if (!mode.empty()) opts.mode = qns::parse_param_mode(mode);
  if (threads > 0) opts.threads = threads;

  if (*run) return qns::cmd_run(opts, std::cout, std::cerr);
  if (*verify) return qns::cmd_verify(opts, std::cout, std::cerr);
  if (*sweep) return qns::cmd_sweep(opts, std::cout, std::cerr);
  return qns::cmd_report(opts, std::cout, std::cerr);
}
