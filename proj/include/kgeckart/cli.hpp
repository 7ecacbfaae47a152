#pragma once

// Command layer behind the kgeckart executable. Every command writes a
// comma-separated table (header row, '#' metadata lines, %.17g numbers) and
// returns one of the exit codes below.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kgeckart/core.hpp"

namespace kgeckart::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitMissingLevel = 4,
  kExitVerification = 5,
};

/// `--grid n_points[,r_max_factor]` applied on top of the config.
GridSettings apply_grid_override(GridSettings base, const std::string& text);

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_wavefunction(const RunConfig& config, int level, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, double rtol, std::ostream& out, std::ostream& err);

struct SweepRequest {
  std::string param;  // v1, v2, alpha or mass
  double from = 0.0;
  double to = 0.0;
  int steps = 0;  // number of sample points, endpoints included
};

/// Parameter values of the sweep; throws InvalidValue on an empty range or
/// unknown parameter.
std::vector<double> sweep_values(const SweepRequest& request);
int cmd_sweep(const RunConfig& config, const SweepRequest& request, std::ostream& out,
              std::ostream& err);

/// Full command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgeckart::cli
