// Command-line runner for the memvol experiments.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "memvol/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulation and convergence experiments for Volterra processes with memory"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  unsigned threads = 1;

  const char* commands[][2] = {
      {"simulate", "Simulate sample paths and write paths_<process>.csv"},
      {"rates", "Estimate strong convergence rates and write rates.csv and slopes.csv"},
      {"kernel-check", "Check the kernel/co-kernel identities"},
      {"bench", "Time endpoint-only against whole-path simulation"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the [run] seed");
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (speed only; 0 = all cores)")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : memvol::cli::kValidation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  memvol::cli::RunOptions options;
  options.out = out;
  options.threads = threads;
  if (chosen->count("--seed") > 0) options.seed = seed;
  return memvol::cli::run_command(chosen->get_name(), config, options, std::cout, std::cerr);
}
