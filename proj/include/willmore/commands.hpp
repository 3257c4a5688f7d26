#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "willmore/config.hpp"

namespace willmore {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,     // configuration, input or output problem
  kExitAborted = 2,    // the time stepper gave up; see abort.txt
  kExitBelowFloor = 3  // an EOC or decay rate fell below the requested floor
};

struct CommandOptions {
  std::optional<std::string> out_dir;  // overrides output.directory
  std::optional<double> assert_order;
  std::ostream* out = nullptr;  // defaults to std::cout
  std::ostream* err = nullptr;  // defaults to std::cerr
};

/// Time integration with observables.csv and VTK snapshots.
int cmd_run(const RunConfig& config, const CommandOptions& options);
/// Spatial convergence study on a stationary surface; writes errors.csv.
int cmd_converge(const RunConfig& config, const CommandOptions& options);
/// Defect and identity residual decay on the configured mesh sequence.
int cmd_check(const RunConfig& config, const CommandOptions& options);
/// Generates the configured mesh, prints its statistics and writes OFF/VTK.
int cmd_mesh(const RunConfig& config, const CommandOptions& options);

/// Loads the configuration and runs `command` (run, converge, check, mesh),
/// mapping every error to its exit code.
int run_command(const std::string& command, const std::string& config_path, const CommandOptions& options);

}  // namespace willmore
