#pragma once

#include <array>
#include <vector>

#include "nlsprof/params.hpp"
#include "nlsprof/series.hpp"

namespace nlsprof {

/// Field data of the autonomous system dU/dxi = N_U / D, dS/dxi = N_S / D
/// with D = (1 + U)^2 + alpha^2 S^2.  D vanishes only at (-1, 0), which is
/// outside the field's domain.
struct FieldValue {
  double D = 0.0;
  double N_U = 0.0;
  double N_S = 0.0;
  double dU = 0.0;
  double dS = 0.0;
};

/// Evaluates the field at (u_bar, s_bar).  Both the expanded polynomial
/// forms of N_U, N_S and the matrix-product forms are computed; they must
/// agree to a few ulps of the term magnitudes, and the expanded forms are
/// returned (fewer cancellations near U = -1).  Throws at the singular
/// point (-1, 0).
FieldValue field(const PhaseState& state, const ProblemParams& params);

inline FieldValue field(double u_bar, double s_bar, const ProblemParams& params) {
  return field(PhaseState{0.0, u_bar, s_bar}, params);
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Analytic Jacobian of (N_U/D, N_S/D) at a non-singular point.
Matrix2 jacobian(const PhaseState& state, const ProblemParams& params);

/// Jacobian at the origin; equals -r * Identity (double eigenvalue -r).
Matrix2 jacobian_at_origin(const ProblemParams& params);

enum class EquilibriumKind { FocusSink, Attractor, Singular };

struct Equilibrium {
  double u_bar = 0.0;
  double s_bar = 0.0;
  EquilibriumKind kind = EquilibriumKind::FocusSink;
};

inline const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::FocusSink: return "focus_sink";
    case EquilibriumKind::Attractor: return "attractor";
    case EquilibriumKind::Singular: return "singular";
  }
  return "?";
}

/// The three equilibria on the S = 0 axis: the origin (focus/sink), the
/// attractor (-r, 0), and the excluded singular point (-1, 0).
std::vector<Equilibrium> equilibria(const ProblemParams& params);

enum class Barrier { UMinusOne, UZero };

/// Normal component of the field on a vertical barrier (the normal being
/// (1, 0) and D > 0, its sign is the sign of N_U):
///   U = -1:  alpha (1 + alpha d - r) S^2   (positive iff alpha d > r - 1)
///   U =  0:  -alpha (r - 1) S^2            (negative for r > 1)
double barrier_normal_sign(Barrier barrier, double s_bar, const ProblemParams& params);

/// N_S on the U = 0 barrier, -S (r + alpha^2 S^2); exposed for
/// cross-reference next to the U = 0 normal component.
double n_s_at_zero_barrier(double s_bar, const ProblemParams& params);

}  // namespace nlsprof
