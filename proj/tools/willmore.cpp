#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef WILLMORE_HAVE_OPENMP
#include <omp.h>
#endif

#include "willmore/commands.hpp"

namespace {

// --threads wins over WILLMORE_THREADS; 0 keeps the OpenMP default.
int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WILLMORE_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring WILLMORE_THREADS='" << env << "'\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Willmore flow and surface diffusion with evolving surface finite elements"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  double assert_order = 0.0;
  int threads = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--threads", threads, "OpenMP threads for parallel assembly")->check(CLI::NonNegativeNumber);
  };
  CLI::App* run = app.add_subcommand("run", "integrate the flow and write observables and snapshots");
  CLI::App* converge = app.add_subcommand("converge", "spatial convergence study on a stationary surface");
  CLI::App* check = app.add_subcommand("check", "defect and identity residual decay");
  CLI::App* mesh = app.add_subcommand("mesh", "generate or convert a mesh and print its statistics");
  for (CLI::App* sub : {run, converge, check, mesh}) add_common(sub);
  CLI::Option* assert_converge = converge->add_option("--assert-order", assert_order, "exit 3 if an EOC is below this");
  CLI::Option* assert_check = check->add_option("--assert-order", assert_order, "decay floor (default study.check_floor)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : willmore::kExitConfig;
  }

  const int n_threads = resolve_threads(threads);
#ifdef WILLMORE_HAVE_OPENMP
  if (n_threads > 0) omp_set_num_threads(n_threads);
#else
  if (n_threads > 1) std::cerr << "warning: built without OpenMP, running serially\n";
#endif

  willmore::CommandOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (*assert_converge || *assert_check) options.assert_order = assert_order;
  const std::string command = app.get_subcommands().front()->get_name();
  return willmore::run_command(command, config_path, options);
}
