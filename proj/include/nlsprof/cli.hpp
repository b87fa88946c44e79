#pragma once

#include <string>
#include <vector>

namespace nlsprof {

enum class Command { Solve, Coeffs, Sweep, Energy, Validate, PlotData };

/// Parsed invocation.  Exactly one command; numeric fields must satisfy the
/// preconditions of the operations the command dispatches to.
struct RunConfig {
  Command command = Command::Solve;

  // parameter tuple(s); sweeps iterate the cartesian product
  std::vector<int> d_values{3};
  std::vector<double> p_values{3.0};
  std::vector<double> r_values{2.1};

  int n_max = 40;
  double tol = 1e-10;
  double xi_start = -4.0;
  double xi_end = 36.0;

  // profile / energy grid (geometric)
  double grid_min = 1e-4;
  double grid_max = 50.0;
  int grid_points = 4097;
  double r_max = 50.0;

  // physical-field snapshot
  bool physical = false;
  double time_T = 1.0;
  double time_t = 0.0;

  // plotdata window
  double u_min = -3.0, u_max = 1.0;
  double s_min = 0.0, s_max = 3.0;
  int n_u = 41, n_s = 41;

  std::string out_path;      // main tabular output; empty or "-" = stdout
  std::string summary_path;  // JSON summary (solve)
  std::string profile_path;  // profile CSV (solve)
  std::string append_path;   // sweep-mode CSV row (energy)

  int workers = 0;  // 0: NLSPROF_WORKERS env or hardware concurrency
};

/// Exit codes: 0 success, 1 domain error, 2 numerical failure, 3 I/O error.
int run(const RunConfig& config);

/// Expands "lo:hi:step" or a comma list or a single number.
std::vector<double> parse_range(const std::string& spec);

}  // namespace nlsprof
