#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "nlsprof/cli.hpp"

namespace {

// shared parameter flags; sweeps accept lists/ranges, the rest use the
// first value of each
void add_param_flags(CLI::App* cmd, std::string* d, std::string* p, std::string* r) {
  cmd->add_option("--d", *d, "spatial dimension (sweep: comma list)")->capture_default_str();
  cmd->add_option("--p", *p, "nonlinearity exponent p > 1 (sweep: lo:hi:step or comma list)")
      ->capture_default_str();
  cmd->add_option("--r", *r, "scaling exponent r > 0 (sweep: lo:hi:step or comma list)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-similar blow-up profiles of the focusing NLS hydrodynamic system"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags take precedence");

  nlsprof::RunConfig cfg;
  std::string d_spec = "3", p_spec = "3", r_spec = "2.1";

  auto* solve = app.add_subcommand("solve", "seed from the series and continue by integration");
  add_param_flags(solve, &d_spec, &p_spec, &r_spec);
  solve->add_option("--N-max", cfg.n_max, "series truncation order")->capture_default_str();
  solve->add_option("--tol", cfg.tol, "integrator tolerance")->capture_default_str();
  solve->add_option("--xi-start", cfg.xi_start)->capture_default_str();
  solve->add_option("--xi-end", cfg.xi_end)->capture_default_str();
  solve->add_option("--out", cfg.out_path, "trajectory CSV (xi,U,S,dU,dS); - for stdout");
  solve->add_option("--summary", cfg.summary_path, "JSON run summary");
  solve->add_option("--profile", cfg.profile_path, "profile CSV (zeta,U_R,S,P,Psi)");
  solve->add_option("--grid-min", cfg.grid_min)->capture_default_str();
  solve->add_option("--grid-max", cfg.grid_max)->capture_default_str();
  solve->add_option("--grid-points", cfg.grid_points)->capture_default_str();
  auto* phys = solve->add_option_group("physical");
  std::vector<double> Tt;
  phys->add_option("--physical", Tt, "emit (x,rho,psi) at blow-up time T and time t")
      ->expected(2);

  auto* coeffs = app.add_subcommand("coeffs", "emit series coefficients as CSV");
  add_param_flags(coeffs, &d_spec, &p_spec, &r_spec);
  coeffs->add_option("--N-max", cfg.n_max)->capture_default_str();
  coeffs->add_option("--out", cfg.out_path, "CSV (n,coefficient,p_bar); - for stdout");

  auto* sweep = app.add_subcommand("sweep", "classify and solve over a parameter grid");
  add_param_flags(sweep, &d_spec, &p_spec, &r_spec);
  sweep->add_option("--N-max", cfg.n_max)->capture_default_str();
  sweep->add_option("--tol", cfg.tol)->capture_default_str();
  sweep->add_option("--xi-start", cfg.xi_start)->capture_default_str();
  sweep->add_option("--xi-end", cfg.xi_end)->capture_default_str();
  sweep->add_option("--workers", cfg.workers, "0 = NLSPROF_WORKERS env or hardware");
  sweep->add_option("--out", cfg.out_path, "sweep table CSV; - for stdout");

  auto* energy = app.add_subcommand("energy", "reduced energy sign of a computed profile");
  add_param_flags(energy, &d_spec, &p_spec, &r_spec);
  energy->add_option("--N-max", cfg.n_max)->capture_default_str();
  energy->add_option("--tol", cfg.tol)->capture_default_str();
  energy->add_option("--R-max", cfg.r_max, "truncation radius")->capture_default_str();
  energy->add_option("--grid-min", cfg.grid_min)->capture_default_str();
  energy->add_option("--grid-points", cfg.grid_points)->capture_default_str();
  energy->add_option("--out", cfg.out_path, "JSON report; - for stdout");
  energy->add_option("--append", cfg.append_path, "append a row to a sweep CSV");

  auto* validate = app.add_subcommand("validate", "run the exact-arithmetic oracle suite");
  validate->add_option("--N-max", cfg.n_max)->capture_default_str();
  validate->add_option("--out", cfg.out_path, "JSON report; - for stdout");

  auto* plot = app.add_subcommand("plotdata", "field samples on a (U,S) grid for plotting");
  add_param_flags(plot, &d_spec, &p_spec, &r_spec);
  plot->add_option("--u-min", cfg.u_min)->capture_default_str();
  plot->add_option("--u-max", cfg.u_max)->capture_default_str();
  plot->add_option("--s-min", cfg.s_min)->capture_default_str();
  plot->add_option("--s-max", cfg.s_max)->capture_default_str();
  plot->add_option("--nu", cfg.n_u)->capture_default_str();
  plot->add_option("--ns", cfg.n_s)->capture_default_str();
  plot->add_option("--out", cfg.out_path, "CSV; - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    for (double d : nlsprof::parse_range(d_spec)) {
      if (d != static_cast<int>(d) || d < 1)
        throw std::invalid_argument("--d must list positive integers");
    }
    cfg.d_values.clear();
    for (double d : nlsprof::parse_range(d_spec)) cfg.d_values.push_back(static_cast<int>(d));
    cfg.p_values = nlsprof::parse_range(p_spec);
    cfg.r_values = nlsprof::parse_range(r_spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (solve->parsed()) {
    cfg.command = nlsprof::Command::Solve;
    if (!Tt.empty()) {
      cfg.physical = true;
      cfg.time_T = Tt[0];
      cfg.time_t = Tt[1];
    }
  } else if (coeffs->parsed()) {
    cfg.command = nlsprof::Command::Coeffs;
  } else if (sweep->parsed()) {
    cfg.command = nlsprof::Command::Sweep;
  } else if (energy->parsed()) {
    cfg.command = nlsprof::Command::Energy;
  } else if (validate->parsed()) {
    cfg.command = nlsprof::Command::Validate;
  } else if (plot->parsed()) {
    cfg.command = nlsprof::Command::PlotData;
  }

  return nlsprof::run(cfg);
}
