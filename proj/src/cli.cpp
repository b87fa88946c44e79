#include "nlsprof/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nlsprof/energy.hpp"
#include "nlsprof/integrate.hpp"
#include "nlsprof/io.hpp"
#include "nlsprof/oracle.hpp"
#include "nlsprof/params.hpp"
#include "nlsprof/phase.hpp"
#include "nlsprof/profile.hpp"
#include "nlsprof/series.hpp"

namespace nlsprof {
namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    atomic_write(path, content);
}

int worker_count(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("NLSPROF_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

json params_json(const ProblemParams& q) {
  return json{{"d", q.d},     {"p", q.p},         {"r", q.r},
              {"alpha", q.alpha}, {"gamma", q.gamma}, {"s_c", q.s_c}};
}

json regime_json(const RegimeVerdict& v) {
  return json{{"supercritical_mass", v.supercritical_mass},
              {"r_window", v.r_window},
              {"barrier_condition", to_string(v.barrier_condition)},
              {"odd_integer_p", v.odd_integer_p}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "xi,U,S,dU,dS\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.samples[i];
    const auto& f = traj.derivatives[i];
    out += csv_row({fmt17(s.xi), fmt17(s.u_bar), fmt17(s.s_bar), fmt17(f.dU), fmt17(f.dS)});
  }
  return out;
}

std::string profile_csv(const Profile& prof) {
  std::string out = "zeta,U_R,S,P,Psi\n";
  for (std::size_t i = 0; i < prof.grid.size(); ++i)
    out += csv_row({fmt17(prof.grid[i]), fmt17(prof.u_r[i]), fmt17(prof.s[i]), fmt17(prof.p[i]),
                    fmt17(prof.psi[i])});
  return out;
}

// Tail window for the decay-rate fit: the last stretch of the run at
// positive xi, clear of the convergence cutoff.
bool pick_decay_window(const Trajectory& traj, double* lo, double* hi) {
  if (traj.size() < 16) return false;
  const double xi_last = traj.back().xi;
  *hi = xi_last - 0.25;
  *lo = std::max(0.5, xi_last - 8.0);
  return *hi > *lo;
}

struct SolveOutcome {
  ProblemParams params;
  RegimeVerdict regime;
  SeriesCoefficients coeffs;
  Trajectory traj;
  double residual = std::nan("");
  DecayFit decay;
  bool decay_ok = false;
};

SolveOutcome solve_tuple(int d, double p, double r, const RunConfig& cfg) {
  SolveOutcome out;
  out.params = new_params(d, p, r);
  out.regime = classify(out.params);
  out.coeffs = compute_coefficients(out.params, cfg.n_max);
  out.traj = integrate(out.params, out.coeffs, cfg.xi_start, cfg.xi_end, cfg.tol);
  if (out.traj.size() >= 5) out.residual = residual_norm(out.traj, out.params);
  double lo, hi;
  if (out.traj.termination == Termination::ConvergedToOrigin &&
      pick_decay_window(out.traj, &lo, &hi)) {
    try {
      out.decay = decay_fit(out.traj, lo, hi);
      out.decay_ok = true;
    } catch (const std::exception&) {
      out.decay_ok = false;
    }
  }
  return out;
}

std::string barrier_status(const Trajectory& traj) {
  if (!traj.events.empty())
    return traj.events.front().which == Barrier::UMinusOne ? "crossed_U-1" : "crossed_U0";
  double umin = 1e300, umax = -1e300;
  for (const auto& s : traj.samples) {
    umin = std::min(umin, s.u_bar);
    umax = std::max(umax, s.u_bar);
  }
  if (umax < -1.0) return "below";
  if (umin > -1.0 && umax < 0.0) return "inside";
  if (std::abs(umin + 1.0) < 1e-12 && std::abs(umax + 1.0) < 1e-12) return "on_barrier";
  return "mixed";
}

json summary_json(const SolveOutcome& o) {
  json j;
  j["params"] = params_json(o.params);
  j["regime"] = regime_json(o.regime);
  j["n_max"] = o.coeffs.n_max;
  j["termination"] = to_string(o.traj.termination);
  j["steps_accepted"] = o.traj.steps_accepted;
  j["steps_rejected"] = o.traj.steps_rejected;
  j["samples"] = o.traj.size();
  j["xi_first"] = o.traj.front().xi;
  j["xi_last"] = o.traj.back().xi;
  j["max_residual"] = o.residual;
  j["barrier"] = barrier_status(o.traj);
  json events = json::array();
  for (const auto& e : o.traj.events)
    events.push_back(json{{"barrier", e.which == Barrier::UMinusOne ? "U=-1" : "U=0"},
                          {"xi", e.xi},
                          {"U", e.u_bar},
                          {"S", e.s_bar}});
  j["barrier_events"] = events;
  if (o.decay_ok) {
    j["decay"] = json{{"rate_U", o.decay.rate_u},
                      {"rate_S", o.decay.rate_s},
                      {"log_coef_U", o.decay.log_coef_u},
                      {"log_coef_S", o.decay.log_coef_s},
                      {"samples", o.decay.n_used}};
  }
  return j;
}

int cmd_solve(const RunConfig& cfg) {
  const SolveOutcome o = solve_tuple(cfg.d_values.at(0), cfg.p_values.at(0), cfg.r_values.at(0), cfg);

  if (!cfg.out_path.empty()) emit(cfg.out_path, trajectory_csv(o.traj));

  if (!cfg.profile_path.empty() || cfg.physical) {
    if (o.traj.termination != Termination::ConvergedToOrigin &&
        o.traj.termination != Termination::ReachedXiEnd)
      throw std::runtime_error("profile requested but the trajectory ended with " +
                               std::string(to_string(o.traj.termination)));
    const double zmax = std::min(cfg.grid_max, std::exp(o.traj.back().xi));
    const auto grid = geometric_grid(cfg.grid_min, zmax, cfg.grid_points);
    const Profile prof = reconstruct(o.traj, o.coeffs, grid);
    if (!cfg.profile_path.empty()) emit(cfg.profile_path, profile_csv(prof));
    if (cfg.physical) {
      const PhysicalField f = physical_fields(prof, o.params, cfg.time_T, cfg.time_t);
      std::string out = "x,rho,psi\n";
      for (std::size_t i = 0; i < f.x.size(); ++i)
        out += csv_row({fmt17(f.x[i]), fmt17(f.rho[i]), fmt17(f.psi[i])});
      emit(cfg.out_path.empty() ? std::string("-") : cfg.out_path + ".physical", out);
    }
  }

  const json j = summary_json(o);
  if (!cfg.summary_path.empty())
    emit(cfg.summary_path, j.dump(2) + "\n");
  else if (cfg.out_path.empty())
    std::cout << j.dump(2) << "\n";

  if (o.traj.termination == Termination::Diverged ||
      o.traj.termination == Termination::Singularity)
    return kExitNumerical;
  return kExitOk;
}

int cmd_coeffs(const RunConfig& cfg) {
  const ProblemParams q = new_params(cfg.d_values.at(0), cfg.p_values.at(0), cfg.r_values.at(0));
  const SeriesCoefficients c = compute_coefficients(q, cfg.n_max);
  std::string out = "n,coefficient,p_bar\n";
  for (int n = -1; n <= c.n_max; ++n) {
    const double v = (n % 2 == 0) ? c.u(n) : c.s(n);
    out += csv_row({std::to_string(n), fmt17(v), fmt17(c.p_bar.at(n))});
  }
  emit(cfg.out_path, out);
  return kExitOk;
}

struct SweepRow {
  int d = 0;
  double p = 0.0, r = 0.0;
  std::string regime, supercritical, r_window, termination, barrier, error;
  std::string steps, residual, rate_u, rate_s;
};

int cmd_sweep(const RunConfig& cfg) {
  struct Tuple {
    int d;
    double p, r;
  };
  std::vector<Tuple> tuples;
  for (int d : cfg.d_values)
    for (double p : cfg.p_values)
      for (double r : cfg.r_values) tuples.push_back({d, p, r});
  if (tuples.empty()) throw std::invalid_argument("sweep: empty ranges");

  std::vector<SweepRow> rows(tuples.size());
  std::atomic<std::size_t> next{0};
  const int nworkers = std::min<int>(worker_count(cfg), static_cast<int>(tuples.size()));

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tuples.size()) return;
      const auto [d, p, r] = tuples[i];
      SweepRow& row = rows[i];
      row.d = d;
      row.p = p;
      row.r = r;
      try {
        const ProblemParams q = new_params(d, p, r);
        const RegimeVerdict v = classify(q);
        row.regime = to_string(v.barrier_condition);
        row.supercritical = v.supercritical_mass ? "true" : "false";
        row.r_window = v.r_window ? "true" : "false";
        if (v.barrier_condition == BarrierCondition::Degenerate) continue;
        const SolveOutcome o = solve_tuple(d, p, r, cfg);
        row.termination = to_string(o.traj.termination);
        row.steps = std::to_string(o.traj.steps_accepted);
        if (std::isfinite(o.residual)) row.residual = fmt17(o.residual);
        row.barrier = barrier_status(o.traj);
        if (o.decay_ok) {
          row.rate_u = fmt17(o.decay.rate_u);
          row.rate_s = fmt17(o.decay.rate_s);
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < nworkers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::string out =
      "d,p,r,regime,supercritical_mass,r_window,termination,steps,max_residual,"
      "decay_rate_U,decay_rate_S,barrier,error\n";
  for (const auto& row : rows)
    out += csv_row({std::to_string(row.d), fmt17(row.p), fmt17(row.r), row.regime,
                    row.supercritical, row.r_window, row.termination, row.steps, row.residual,
                    row.rate_u, row.rate_s, row.barrier, row.error});
  emit(cfg.out_path, out);
  return kExitOk;
}

int cmd_energy(const RunConfig& cfg) {
  const SolveOutcome o = solve_tuple(cfg.d_values.at(0), cfg.p_values.at(0), cfg.r_values.at(0), cfg);
  if (o.traj.termination != Termination::ConvergedToOrigin &&
      o.traj.termination != Termination::ReachedXiEnd)
    throw std::runtime_error("energy: trajectory ended with " +
                             std::string(to_string(o.traj.termination)));
  const double zmax = std::min(cfg.r_max, 0.999 * std::exp(o.traj.back().xi));
  const auto grid = geometric_grid(cfg.grid_min, zmax, cfg.grid_points);
  const Profile prof = reconstruct(o.traj, o.coeffs, grid);
  const EnergyReport rep = energy_sign(prof, o.params, zmax);

  json j;
  j["params"] = params_json(o.params);
  j["R_max"] = rep.r_max;
  j["grid_points"] = rep.grid_points;
  j["value"] = rep.value;
  j["tail_bound"] = rep.tail_bound;
  j["sign"] = to_string(rep.sign);
  emit(cfg.out_path, j.dump(2) + "\n");

  if (!cfg.append_path.empty()) {
    std::ifstream probe(cfg.append_path);
    std::stringstream existing;
    if (probe) existing << probe.rdbuf();
    std::string content = existing.str();
    if (content.empty()) content = "d,p,r,R_max,value,tail_bound,sign\n";
    content += csv_row({std::to_string(o.params.d), fmt17(o.params.p), fmt17(o.params.r),
                        fmt17(rep.r_max), fmt17(rep.value), fmt17(rep.tail_bound),
                        to_string(rep.sign)});
    atomic_write(cfg.append_path, content);
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg) {
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back(json{{"name", name}, {"pass", pass}, {"detail", detail}});
    all = all && pass;
  };

  // exact vs floating coefficients for (d, alpha, r) = (3, 1/2, 21/10)
  {
    const auto rp = oracle::make_rational_params(3, 1, 2, 21, 10);
    const auto exact = oracle::exact_coefficients(rp, 40);
    const ProblemParams q = new_params(3, 3.0, 2.1);
    const SeriesCoefficients c = compute_coefficients(q, 40);
    double worst = 0.0;
    for (const auto& [n, uv] : c.u_coef) {
      const double ev = static_cast<double>(exact.u(n));
      worst = std::max(worst, std::abs(uv - ev) / std::max(1e-300, std::abs(ev)));
    }
    for (const auto& [n, sv] : c.s_coef) {
      const double ev = static_cast<double>(exact.s(n));
      worst = std::max(worst, std::abs(sv - ev) / std::max(1e-300, std::abs(ev)));
    }
    record("coefficients_vs_exact_rational", worst <= 1e-10,
           "max relative deviation " + fmt17(worst));
    record("exact_U0_closed_form", exact.u(0) == oracle::Rational(-11, 15),
           "U_0 = -(r-1)/(alpha d)");
  }

  // exact residual of the truncated series in the profile equations
  {
    const auto rp = oracle::make_rational_params(3, 1, 2, 21, 10);
    const auto exact = oracle::exact_coefficients(rp, 24);
    const int first_bad = oracle::first_nonzero_residual_order(exact);
    record("exact_series_residual_zero", first_bad == exact.n_max - 1,
           "first nonzero residual order " + std::to_string(first_bad));
  }

  // field polynomials vs exact rational evaluation on a deterministic mesh
  {
    const auto rp = oracle::make_rational_params(3, 1, 2, 21, 10);
    const ProblemParams q = new_params(3, 3.0, 2.1);
    double worst = 0.0;
    for (int iu = -30; iu <= 10; ++iu)
      for (int is = 0; is <= 30; ++is) {
        const oracle::Rational u(iu, 10), s(is, 10);
        if (u == -1 && s == 0) continue;
        const auto [De, Nue, Nse] = oracle::exact_field(u, s, rp);
        const FieldValue f = field(iu / 10.0, is / 10.0, q);
        worst = std::max(worst, std::abs(f.N_U - static_cast<double>(Nue)));
        worst = std::max(worst, std::abs(f.N_S - static_cast<double>(Nse)));
        worst = std::max(worst, std::abs(f.D - static_cast<double>(De)));
      }
    record("field_vs_exact_rational", worst <= 1e-12, "max absolute deviation " + fmt17(worst));
  }

  // ternary-tree numbers against the closed form binom(3n, n) / (2n+1)
  {
    bool ok = true;
    for (int n = 0; n <= 20 && ok; ++n) {
      BigInt binom = 1;
      for (int k = 1; k <= n; ++k) binom = binom * (3 * n - k + 1) / k;
      ok = tri_catalan(n) * (2 * n + 1) == binom;
    }
    record("tri_catalan_closed_form", ok, "n <= 20");
    bool bound = true;
    BigInt pw = 1;
    for (int n = 0; n <= 64; ++n, pw *= 8) bound = bound && tri_catalan(n) <= pw;
    record("tri_catalan_growth_bound", bound, "c_n <= 8^n for n <= 64");
  }

  // majorant check on the reference tuple
  {
    const ProblemParams q = new_params(3, 3.0, 2.1);
    const auto rep = majorant_check(compute_coefficients(q, cfg.n_max));
    record("majorant_growth", rep.ok, "fitted rate " + fmt17(rep.rate));
  }

  json j;
  j["checks"] = checks;
  j["all_pass"] = all;
  emit(cfg.out_path, j.dump(2) + "\n");
  return all ? kExitOk : kExitNumerical;
}

int cmd_plotdata(const RunConfig& cfg) {
  const ProblemParams q = new_params(cfg.d_values.at(0), cfg.p_values.at(0), cfg.r_values.at(0));
  if (cfg.n_u < 2 || cfg.n_s < 2 || !(cfg.u_max > cfg.u_min) || !(cfg.s_max > cfg.s_min))
    throw std::invalid_argument("plotdata: bad grid window");
  std::string out = "U,S,D,N_U,N_S,dU,dS\n";
  for (int i = 0; i < cfg.n_u; ++i) {
    const double u = cfg.u_min + (cfg.u_max - cfg.u_min) * i / (cfg.n_u - 1);
    for (int j = 0; j < cfg.n_s; ++j) {
      const double s = cfg.s_min + (cfg.s_max - cfg.s_min) * j / (cfg.n_s - 1);
      if (std::hypot(u + 1.0, s) < 1e-9) {
        out += csv_row({fmt17(u), fmt17(s), "0", "", "", "", ""});
        continue;
      }
      const FieldValue f = field(u, s, q);
      out += csv_row({fmt17(u), fmt17(s), fmt17(f.D), fmt17(f.N_U), fmt17(f.N_S), fmt17(f.dU),
                      fmt17(f.dS)});
    }
  }
  emit(cfg.out_path, out);
  return kExitOk;
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0))
      throw std::invalid_argument("range must be lo:hi:step, got '" + spec + "'");
    for (int k = 0;; ++k) {
      const double v = lo + k * step;
      if (v > hi + step * 1e-9) break;
      out.push_back(v);
    }
    return out;
  }
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty range '" + spec + "'");
  return out;
}

int run(const RunConfig& config) {
  try {
    switch (config.command) {
      case Command::Solve: return cmd_solve(config);
      case Command::Coeffs: return cmd_coeffs(config);
      case Command::Sweep: return cmd_sweep(config);
      case Command::Energy: return cmd_energy(config);
      case Command::Validate: return cmd_validate(config);
      case Command::PlotData: return cmd_plotdata(config);
    }
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::runtime_error& e) {
    // I/O problems carry their own exit code; everything else here is a
    // numerical failure (divergence, singularity, failed checks)
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.find("cannot open") != std::string::npos ||
        msg.find("write failed") != std::string::npos ||
        msg.find("rename") != std::string::npos)
      return kExitIo;
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace nlsprof
