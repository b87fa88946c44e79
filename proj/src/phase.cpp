#include "nlsprof/phase.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlsprof {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Forms {
  double value;  // expanded polynomial form
  double scale;  // magnitude scale of the constituent terms
};

// N_U = -alpha^2 d S^2 U - alpha (r-1) S^2 - U (U+1) (r+U)
Forms n_u_poly(double u, double s, double al, int d, double r) {
  const double a2 = al * al;
  const double t1 = -a2 * d * s * s * u;
  const double t2 = -al * (r - 1.0) * s * s;
  const double t3 = -u * (u + 1.0) * (r + u);
  return {t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

// N_S = -alpha^2 S^3 + S U (-ad + ar - r - 1) + S U^2 (-ad + a - 1) - r S
Forms n_s_poly(double u, double s, double al, int d, double r) {
  const double a2 = al * al;
  const double t1 = -a2 * s * s * s;
  const double t2 = s * u * (-al * d + al * r - r - 1.0);
  const double t3 = s * u * u * (-al * d + al - 1.0);
  const double t4 = -r * s;
  return {t1 + t2 + t3 + t4, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)};
}

}  // namespace

FieldValue field(const PhaseState& state, const ProblemParams& params) {
  const double u = state.u_bar;
  const double s = state.s_bar;
  const double al = params.alpha;
  const double r = params.r;
  const int d = params.d;

  const double onepu = 1.0 + u;
  const double D = onepu * onepu + al * al * s * s;
  if (D == 0.0)
    throw std::domain_error("field: singular point (-1, 0), D = 0");

  const Forms nu = n_u_poly(u, s, al, d, r);
  const Forms ns = n_s_poly(u, s, al, d, r);

  // Matrix-product route: inverse of [[1+U, -aS], [aS, 1+U]] applied to the
  // right-hand sides of the pre-inversion system.
  const double rhs_u = -r * u - u * u + al * s * s;
  const double rhs_s = -r * s - u * s - al * d * u * s;
  const double nu_mat = onepu * rhs_u + al * s * rhs_s;
  const double ns_mat = -al * s * rhs_u + onepu * rhs_s;

  // ulp scale of the two computations: magnitudes of the constituent terms
  // (the right-hand-side sums cancel internally, so their parts count)
  const double mag_rhs_u = std::abs(r * u) + u * u + al * s * s;
  const double mag_rhs_s = std::abs(r * s) + std::abs(u * s) * (1.0 + al * d);
  const double scale_u = std::abs(onepu) * mag_rhs_u + al * std::abs(s) * mag_rhs_s + nu.scale;
  const double scale_s = al * std::abs(s) * mag_rhs_u + std::abs(onepu) * mag_rhs_s + ns.scale;
  if (std::abs(nu.value - nu_mat) > 4.0 * kEps * std::max(scale_u, 1e-300) ||
      std::abs(ns.value - ns_mat) > 4.0 * kEps * std::max(scale_s, 1e-300))
    throw std::logic_error("field: polynomial and matrix forms of N_U/N_S disagree");

  FieldValue f;
  f.D = D;
  f.N_U = nu.value;
  f.N_S = ns.value;
  f.dU = f.N_U / D;
  f.dS = f.N_S / D;
  return f;
}

Matrix2 jacobian(const PhaseState& state, const ProblemParams& params) {
  const double u = state.u_bar;
  const double s = state.s_bar;
  const double al = params.alpha;
  const double a2 = al * al;
  const double r = params.r;
  const int d = params.d;

  const FieldValue f = field(state, params);

  const double dnu_du = -a2 * d * s * s - (3.0 * u * u + 2.0 * (r + 1.0) * u + r);
  const double dnu_ds = -2.0 * a2 * d * s * u - 2.0 * al * (r - 1.0) * s;
  const double dns_du = s * (-al * d + al * r - r - 1.0) + 2.0 * s * u * (-al * d + al - 1.0);
  const double dns_ds =
      -3.0 * a2 * s * s + u * (-al * d + al * r - r - 1.0) + u * u * (-al * d + al - 1.0) - r;
  const double dd_du = 2.0 * (1.0 + u);
  const double dd_ds = 2.0 * a2 * s;

  const double D2 = f.D * f.D;
  return Matrix2{{{(dnu_du * f.D - f.N_U * dd_du) / D2, (dnu_ds * f.D - f.N_U * dd_ds) / D2},
                  {(dns_du * f.D - f.N_S * dd_du) / D2, (dns_ds * f.D - f.N_S * dd_ds) / D2}}};
}

Matrix2 jacobian_at_origin(const ProblemParams& params) {
  return jacobian(PhaseState{0.0, 0.0, 0.0}, params);
}

std::vector<Equilibrium> equilibria(const ProblemParams& params) {
  std::vector<Equilibrium> eq;
  eq.push_back({0.0, 0.0, EquilibriumKind::FocusSink});
  eq.push_back({-params.r, 0.0, EquilibriumKind::Attractor});
  eq.push_back({-1.0, 0.0, EquilibriumKind::Singular});
  for (const auto& e : eq) {
    if (e.kind == EquilibriumKind::Singular) continue;  // D = 0, not evaluated
    const FieldValue f = field(e.u_bar, e.s_bar, params);
    if (std::abs(f.N_U) > 1e-14 || std::abs(f.N_S) > 1e-14)
      throw std::logic_error("equilibria: field does not vanish at a claimed equilibrium");
  }
  return eq;
}

double barrier_normal_sign(Barrier barrier, double s_bar, const ProblemParams& params) {
  const double al = params.alpha;
  const double s2 = s_bar * s_bar;
  switch (barrier) {
    case Barrier::UMinusOne:
      return al * (1.0 + al * params.d - params.r) * s2;
    case Barrier::UZero:
      return -al * (params.r - 1.0) * s2;
  }
  throw std::invalid_argument("barrier_normal_sign: unknown barrier");
}

double n_s_at_zero_barrier(double s_bar, const ProblemParams& params) {
  return -s_bar * (params.r + params.alpha * params.alpha * s_bar * s_bar);
}

}  // namespace nlsprof
