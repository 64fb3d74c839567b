#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "memvol/cli/config.hpp"

namespace memvol::cli {

struct RunOptions {
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;  ///< overrides [run] seed
  unsigned threads = 1;               ///< affects speed only
};

enum ExitCode : int { kOk = 0, kValidation = 1, kTolerance = 2, kIo = 3 };

/// Each command validates the whole config first, then writes its outputs and
/// a verbatim copy of the config into options.out. Errors are thrown as
/// ValidationError, ToleranceError or IoError.
void run_simulate(const Config& config, const RunOptions& options, std::ostream& log);
void run_rates(const Config& config, const RunOptions& options, std::ostream& log);
void run_kernel_check(const Config& config, const RunOptions& options, std::ostream& log);
void run_bench(const Config& config, const RunOptions& options, std::ostream& log);

/// Loads the config, dispatches by subcommand name and maps errors to exit codes.
int run_command(std::string_view command, const std::filesystem::path& config_path, const RunOptions& options,
                std::ostream& log, std::ostream& err);

}  // namespace memvol::cli
