#ifndef DIRAC_GAP_CLI_HPP
#define DIRAC_GAP_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dirac_gap/analytic_oracles.hpp"
#include "dirac_gap/bounds.hpp"
#include "dirac_gap/pencil_solver.hpp"

namespace dirac_gap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string command;
  std::string spec_path;
  MeshParams mesh;
  std::optional<double> tol;
  std::optional<double> delta;
  std::size_t modes = 16;
  unsigned jobs = 1;
  std::string format = "json";
  std::string out_path;
  bool json = false;

  // bounds
  std::optional<double> anchor;
  std::vector<double> intervals;  // flattened pairs
  double interval_h = 1e-3;

  // sweep
  std::string family = "toy";
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t steps = 0;

  // oracle and toy families
  std::string oracle = "toy";
  double M = 4.0;
  int gamma = 0;
  double t = 1.0;
  std::optional<std::string> alpha;
  int n = 4;
};

SolverParams solver_params(const RunConfig& config);

/// Angle from "0", "pi/2", "3pi/4", "pi/8" or a plain number (radians).
double parse_angle(const std::string& text);

/// Each command writes its result to `out` (or config.out_path) and
/// diagnostics to `err`, returning the exit code.
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads DIRAC_GAP_LOG (trace, debug, info, warn, error, off) and routes
/// logging to stderr.
void configure_logging();

}  // namespace dirac_gap::cli

#endif  // DIRAC_GAP_CLI_HPP
