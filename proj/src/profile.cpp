#include "nlsprof/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlsprof/numerics.hpp"

namespace nlsprof {
namespace {

// Ubar, Sbar at log zeta: series below the handover, trajectory above.
class PairEvaluator {
 public:
  PairEvaluator(const Trajectory& traj, const SeriesCoefficients& coeffs)
      : traj_(traj), coeffs_(coeffs) {}

  PhaseState at(double zeta) const {
    const double xi = std::log(zeta);
    if (zeta < kSeriesHandover) return evaluate(coeffs_, xi).state;
    const auto& xs = traj_.samples;
    if (xi < xs.front().xi || xi > xs.back().xi)
      throw std::out_of_range("reconstruct: grid point outside the trajectory range");
    // rightmost sample with xi_k <= xi
    std::size_t lo = 0, hi = xs.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (xs[mid].xi <= xi ? lo : hi) = mid;
    }
    const auto& a = xs[lo];
    const auto& b = xs[lo + 1];
    const auto& fa = traj_.derivatives[lo];
    const auto& fb = traj_.derivatives[lo + 1];
    PhaseState p;
    p.xi = xi;
    p.u_bar = hermite_value(xi, a.xi, b.xi, a.u_bar, b.u_bar, fa.dU, fb.dU);
    p.s_bar = hermite_value(xi, a.xi, b.xi, a.s_bar, b.s_bar, fa.dS, fb.dS);
    return p;
  }

  double u_r(double zeta) const { return zeta * at(zeta).u_bar; }

 private:
  const Trajectory& traj_;
  const SeriesCoefficients& coeffs_;
};

// Exact antiderivative of U_R/2 = sum U_n zeta^{n+1} / 2 from 0, valid in
// the series disk.
double psi_series(const SeriesCoefficients& coeffs, double zeta) {
  CompensatedSum acc;
  for (const auto& [n, c] : coeffs.u_coef) {
    if (n % 2 != 0 || n < 0) continue;
    acc.add(c * std::pow(zeta, n + 2) / (2.0 * (n + 2)));
  }
  return acc.value();
}

}  // namespace

Profile reconstruct(const Trajectory& traj, const SeriesCoefficients& coeffs,
                    const std::vector<double>& grid) {
  if (traj.termination != Termination::ConvergedToOrigin &&
      traj.termination != Termination::ReachedXiEnd)
    throw std::invalid_argument("reconstruct: trajectory did not converge");
  if (grid.empty()) throw std::invalid_argument("reconstruct: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw std::invalid_argument("reconstruct: grid must be positive and strictly increasing");
  }
  if (!(grid.front() <= kSeriesHandover))
    throw std::invalid_argument("reconstruct: grid must start below the series handover radius");

  PairEvaluator ev(traj, coeffs);
  Profile prof;
  prof.params = traj.params;
  prof.grid = grid;
  prof.u_r.resize(grid.size());
  prof.s.resize(grid.size());
  prof.p.resize(grid.size());
  prof.psi.resize(grid.size());

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PhaseState st = ev.at(grid[i]);
    prof.u_r[i] = grid[i] * st.u_bar;
    prof.s[i] = grid[i] * st.s_bar;
    prof.p[i] = density_from_S(prof.s[i], prof.params);
  }

  // Psi: exact series head up to grid[0], then one Simpson panel per grid
  // interval with a midpoint evaluation (4th order on any spacing).
  prof.psi[0] = psi_series(coeffs, grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double za = grid[i - 1], zb = grid[i];
    const double fm = ev.u_r(0.5 * (za + zb)) / 2.0;
    const double fa = prof.u_r[i - 1] / 2.0, fb = prof.u_r[i] / 2.0;
    prof.psi[i] = prof.psi[i - 1] + (zb - za) / 6.0 * (fa + 4.0 * fm + fb);
  }
  return prof;
}

double density_from_S(double s, const ProblemParams& params) {
  if (!(s > 0.0)) throw std::domain_error("density_from_S: S must be positive");
  const double al = params.alpha;
  return std::pow(std::sqrt(al) * s / (2.0 * std::pow(params.r, 1.0 - al)), 1.0 / al);
}

QuantumPressure quantum_pressure_correction(const Profile& profile, const ProblemParams& params,
                                            double s_time) {
  const auto& z = profile.grid;
  const std::size_t n = z.size();
  if (n < 5)
    throw std::invalid_argument("quantum_pressure_correction: grid too coarse for the stencils");
  if (s_time < 0.0) throw std::invalid_argument("quantum_pressure_correction: s must be >= 0");

  const double expo = 1.0 / (2.0 * params.alpha);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(profile.s[i] > 0.0))
      throw std::domain_error("quantum_pressure_correction: S must be positive on the grid");
    f[i] = std::pow(profile.s[i], expo);
  }

  const double amp = std::exp((4.0 - 2.0 * params.r) * s_time);
  QuantumPressure out;
  out.value.resize(n);
  out.full_order.assign(n, 1);

  std::vector<double> xs(5), fs(5);
  for (std::size_t i = 0; i < n; ++i) {
    // centered 5-point stencil where possible, shifted at the ends
    std::size_t start = i >= 2 ? i - 2 : 0;
    start = std::min(start, n - 5);
    const bool centered = (start + 2 == i);
    if (!centered) out.full_order[i] = 0;
    for (int j = 0; j < 5; ++j) {
      xs[j] = z[start + j];
      fs[j] = f[start + j];
    }
    const auto w1 = fornberg_weights(z[i], xs, 1);
    const auto w2 = fornberg_weights(z[i], xs, 2);
    double d1 = 0.0, d2 = 0.0;
    for (int j = 0; j < 5; ++j) {
      d1 += w1[j] * fs[j];
      d2 += w2[j] * fs[j];
    }
    const double lap = d2 + (params.d - 1) * d1 / z[i];
    out.value[i] = amp * lap / f[i];
  }
  return out;
}

PhysicalField physical_fields(const Profile& profile, const ProblemParams& params, double T,
                              double t) {
  if (!(t < T)) throw std::invalid_argument("physical_fields: need t < T");
  if (!(T > 0.0) || t < 0.0) throw std::invalid_argument("physical_fields: need 0 <= t < T");

  const double tau = T - t;
  PhysicalField out;
  out.T = T;
  out.t = t;
  out.s_time = -std::log(tau) / params.r;

  const double scale_x = std::pow(tau, 1.0 / params.r);  // x = y e^{-s} = y tau^{1/r}
  const double pref_rho = std::pow(tau, 1.0 / (params.alpha * params.r) - 1.0 / params.alpha) /
                          params.r;
  const double pref_psi = std::pow(tau, 2.0 / params.r - 1.0) / params.r;

  const std::size_t n = profile.grid.size();
  out.x.resize(n);
  out.y = profile.grid;
  out.rho.resize(n);
  out.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = profile.grid[i] * scale_x;
    out.rho[i] = pref_rho * profile.p[i];
    out.psi[i] = pref_psi * profile.psi[i];
  }
  return out;
}

bool parity_extension_check(const SeriesCoefficients& coeffs) {
  for (const auto& [n, c] : coeffs.u_coef)
    if (n % 2 != 0 || n < 0) return false;
  for (const auto& [n, c] : coeffs.s_coef)
    if (n % 2 == 0 || n < -1) return false;
  return true;
}

std::vector<double> geometric_grid(double zeta_min, double zeta_max, int n) {
  if (!(zeta_min > 0.0) || !(zeta_max > zeta_min) || n < 2)
    throw std::invalid_argument("geometric_grid: bad arguments");
  std::vector<double> g(n);
  const double lo = std::log(zeta_min), hi = std::log(zeta_max);
  for (int i = 0; i < n; ++i) g[i] = std::exp(lo + (hi - lo) * i / (n - 1));
  g.front() = zeta_min;
  g.back() = zeta_max;
  return g;
}

}  // namespace nlsprof
