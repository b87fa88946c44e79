#pragma once

#include <cstdint>
#include <vector>

#include "nlsprof/integrate.hpp"
#include "nlsprof/params.hpp"
#include "nlsprof/series.hpp"

namespace nlsprof {

/// Handover radius between the series and trajectory representations;
/// inside the proven convergence disk, past the trajectory's start.
inline constexpr double kSeriesHandover = 0.9 / 8.0;

/// Physical-radius profile (U_R, S, P, Psi) on a strictly increasing grid,
///   U_R = zeta Ubar(log zeta),  S = zeta Sbar(log zeta),
///   P = (sqrt(alpha) S / (2 r^{1-alpha}))^{1/alpha},
///   Psi(zeta) = int_0^zeta U_R / 2   (gauge Psi(0) = 0).
struct Profile {
  ProblemParams params;
  std::vector<double> grid;  // zeta values
  std::vector<double> u_r;
  std::vector<double> s;
  std::vector<double> p;
  std::vector<double> psi;
};

/// Snapshot of the physical density and phase at time t < T on the x grid
/// matched to the profile grid (y = x e^s lands on it).
struct PhysicalField {
  double T = 1.0;
  double t = 0.0;
  double s_time = 0.0;  // rescaled time, -log(T - t)/r
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> rho;
  std::vector<double> psi;
};

/// Builds the profile from the converged trajectory plus the series (used
/// below the handover radius).  Trajectory values are interpolated by cubic
/// Hermite with the stored derivatives; grid points outside the trajectory
/// range are an error.  Psi accumulates midpoint-Simpson panels, seeded by
/// the exact series antiderivative at the first grid point.
Profile reconstruct(const Trajectory& traj, const SeriesCoefficients& coeffs,
                    const std::vector<double>& grid);

/// Inverse of the defining relation S = 2 r^{1-alpha} P^alpha / sqrt(alpha).
double density_from_S(double s, const ProblemParams& params);

struct QuantumPressure {
  std::vector<double> value;
  std::vector<std::uint8_t> full_order;  // 0 where a one-sided stencil degraded the order
};

/// The neglected correction e^{(4-2r)s} Laplacian(f)/f with f = S^{1/(2 alpha)},
/// radial Laplacian f'' + (d-1) f'/zeta by finite differences on the grid
/// (5-point stencils, one-sided and flagged at the boundary).
QuantumPressure quantum_pressure_correction(const Profile& profile, const ProblemParams& params,
                                            double s_time);

/// Physical density/phase at time t from the self-similar ansatz.
PhysicalField physical_fields(const Profile& profile, const ProblemParams& params, double T,
                              double t);

/// True iff the coefficient index sets are parity-pure (U even, S odd),
/// which is what makes U_R odd and S even under the zeta -> -zeta extension.
bool parity_extension_check(const SeriesCoefficients& coeffs);

/// Geometric grid helper: n points, uniform in log zeta.
std::vector<double> geometric_grid(double zeta_min, double zeta_max, int n);

}  // namespace nlsprof
