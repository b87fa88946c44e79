#include "nlsprof/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlsprof/numerics.hpp"

namespace nlsprof {
namespace {

// Composite Simpson in a transformed coordinate with uniform spacing h on
// values g[0..n-1]; a trailing 3/8 panel absorbs an odd interval count.
double simpson_uniform(const std::vector<double>& g, double h) {
  const std::size_t n = g.size();
  if (n < 4) throw std::invalid_argument("simpson_uniform: too few samples");
  CompensatedSum acc;
  std::size_t stop = n - 1;        // index past the last pair-panel
  const bool odd = (n - 1) % 2 != 0;
  if (odd) stop = n - 4;           // leave three intervals for the 3/8 rule
  for (std::size_t i = 0; i + 2 <= stop; i += 2)
    acc.add(h / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]));
  if (odd)
    acc.add(3.0 * h / 8.0 * (g[n - 4] + 3.0 * g[n - 3] + 3.0 * g[n - 2] + g[n - 1]));
  return acc.value();
}

void require_geometric(const std::vector<double>& grid, double* h_out) {
  const std::size_t n = grid.size();
  if (n < 8) throw std::invalid_argument("energy: grid too coarse");
  const double h = std::log(grid[1] / grid[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hi = std::log(grid[i + 1] / grid[i]);
    if (std::abs(hi - h) > 1e-8 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("energy: grid must be geometric (uniform in log R)");
  }
  *h_out = h;
}

}  // namespace

EnergyReport energy_sign(const Profile& profile, const ProblemParams& params, double r_max) {
  const double al = params.alpha;
  const double decay = (params.r - 1.0) * (1.0 / al + 2.0);  // tail rate of |integrand| R / R^{d}
  if (!(decay > params.d))
    throw std::domain_error(
        "energy_sign: integrability condition (r-1)(1/alpha+2) > d does not hold");
  if (!(profile.grid.back() >= r_max * (1.0 - 1e-12)))
    throw std::invalid_argument("energy_sign: profile does not reach R_max");

  double h = 0.0;
  require_geometric(profile.grid, &h);

  // integrand g(R) R (the log-R jacobian), truncated at R_max
  std::size_t n_use = profile.grid.size();
  while (n_use > 0 && profile.grid[n_use - 1] > r_max * (1.0 + 1e-12)) --n_use;
  if (n_use < 8) throw std::invalid_argument("energy_sign: too few grid points below R_max");

  std::vector<double> g(n_use);
  for (std::size_t i = 0; i < n_use; ++i) {
    const double R = profile.grid[i];
    const double s = profile.s[i];
    const double u = profile.u_r[i];
    const double integrand = std::pow(s, 1.0 / al) *
                             (0.5 * u * u - al * s * s / (params.p + 1.0)) *
                             std::pow(R, params.d - 1);
    g[i] = integrand * R;
  }

  EnergyReport rep;
  rep.r_max = profile.grid[n_use - 1];
  rep.grid_points = n_use;

  // head [0, R_0]: integrand ~ C R^{d-1} there (S -> 1, U_R -> 0), so the
  // closed-form leading contribution is integrand(R_0) R_0 / d = g[0]/d
  rep.value = simpson_uniform(g, h) + g[0] / params.d;

  // tail fit on the last decade of |integrand|: |g(R)| ~ C R^{d - decay},
  // so int_{R_max}^inf <= C R_max^{d-decay} / (decay - d); doubled.
  double c_fit = 0.0;
  const double lo = rep.r_max / 10.0;
  for (std::size_t i = 0; i < n_use; ++i) {
    const double R = profile.grid[i];
    if (R < lo) continue;
    const double absint = std::abs(g[i] / R);  // |integrand|
    c_fit = std::max(c_fit, absint * std::pow(R, decay - (params.d - 1)));
  }
  rep.tail_bound = 2.0 * c_fit * std::pow(rep.r_max, params.d - decay) / (decay - params.d);

  if (rep.value + rep.tail_bound < 0.0)
    rep.sign = EnergySign::Negative;
  else if (rep.value - rep.tail_bound > 0.0)
    rep.sign = EnergySign::Positive;
  else
    rep.sign = EnergySign::Indeterminate;
  return rep;
}

double full_energy(const PhysicalField& field, const ProblemParams& params) {
  const auto& x = field.x;
  const std::size_t n = x.size();
  if (n < 8) throw std::invalid_argument("full_energy: grid too coarse");
  for (double v : field.rho)
    if (!(v > 0.0)) throw std::domain_error("full_energy: rho must be positive");

  // gradients on the (geometric) x grid by shifted 5-point stencils
  std::vector<double> dpsi(n), drho(n);
  std::vector<double> xs(5);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t start = i >= 2 ? i - 2 : 0;
    start = std::min(start, n - 5);
    for (int j = 0; j < 5; ++j) xs[j] = x[start + j];
    const auto w = fornberg_weights(x[i], xs, 1);
    double dp = 0.0, dr = 0.0;
    for (int j = 0; j < 5; ++j) {
      dp += w[j] * field.psi[start + j];
      dr += w[j] * field.rho[start + j];
    }
    dpsi[i] = dp;
    drho[i] = dr;
  }

  double h = 0.0;
  require_geometric(x, &h);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = field.rho[i];
    const double bracket = 0.5 * dpsi[i] * dpsi[i] + drho[i] * drho[i] / (8.0 * rho * rho) -
                           std::pow(rho, 0.5 * (params.p - 1.0)) / (params.p + 1.0);
    g[i] = rho * bracket * std::pow(x[i], params.d - 1) * x[i];
  }
  return simpson_uniform(g, h);
}

}  // namespace nlsprof
