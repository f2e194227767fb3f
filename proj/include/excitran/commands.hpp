#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "excitran/config.hpp"

namespace excitran {

struct CommandOptions {
  int threads = 0;  ///< 0 = EXCITRAN_THREADS or hardware concurrency
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::string summary;  ///< one-line JSON for stdout
};

/// spectrum, propagate, efficiency, sweep, disorder, fit.
const std::vector<std::string>& command_names();

/// Run one subcommand. Writes `<out>/<name>.csv` (propagate writes
/// trajectory.csv) plus the resolved configuration `<out>/<name>.config.json`.
/// Throws excitran::Error subclasses on failure.
CommandResult run_command(std::string_view name, RunConfig config, const CommandOptions& opts = {});

}  // namespace excitran
