#include "commands.hpp"

#include "tcg/analysis.hpp"
#include "tcg/sim.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace tcg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Time-coarse-grained effective generators"};
  app.require_subcommand(1);
  Options opt;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration (TOML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--order", opt.order, "Engine order override")->check(CLI::PositiveNumber);
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto* threshold = app.add_subcommand("threshold", "Stability thresholds of the inverted pendulum");
  auto* phase = app.add_subcommand("phase-space", "Filtered and effective trajectories");
  auto* couplings = app.add_subcommand("couplings", "Second-order coupling magnitudes");
  auto* selftest = app.add_subcommand("selftest", "Fast acceptance subset");
  add_run_flags(threshold);
  add_run_flags(phase);
  add_run_flags(couplings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*threshold) return cmd_threshold(opt, std::cerr);
    if (*phase) return cmd_phase_space(opt, std::cerr);
    if (*couplings) return cmd_couplings(opt, std::cerr);
    if (*selftest) return cmd_selftest(std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const tcg::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
