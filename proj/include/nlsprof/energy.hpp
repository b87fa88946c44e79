#pragma once

#include <string>
#include <vector>

#include "nlsprof/params.hpp"
#include "nlsprof/profile.hpp"

namespace nlsprof {

enum class EnergySign { Negative, Positive, Indeterminate };

inline const char* to_string(EnergySign s) {
  switch (s) {
    case EnergySign::Negative: return "negative";
    case EnergySign::Positive: return "positive";
    case EnergySign::Indeterminate: return "indeterminate";
  }
  return "?";
}

/// Truncated value of the reduced energy integrand
///   int_0^{R_max} S^{1/alpha} (U_R^2/2 - alpha S^2/(p+1)) R^{d-1} dR
/// plus a fitted bound on the discarded tail.  The verdict uses the bound:
/// negative iff value + tail_bound < 0, positive iff value - tail_bound > 0,
/// indeterminate otherwise.
struct EnergyReport {
  double value = 0.0;
  double tail_bound = 0.0;
  EnergySign sign = EnergySign::Indeterminate;
  double r_max = 0.0;
  std::size_t grid_points = 0;
};

/// Quadrature of the reduced integrand on [0, R_max] over the profile grid
/// (composite Simpson in log R, head closed by the leading-order term).
/// Requires the integrability condition (r-1)(1/alpha + 2) > d and a grid
/// that is geometric (uniform in log R) and reaches R_max.  The tail
/// constant is fitted on the last decade of |integrand| and doubled.
EnergyReport energy_sign(const Profile& profile, const ProblemParams& params, double r_max);

/// Full three-term radial energy
///   int rho (|psi'|^2/2 + |rho'|^2/(8 rho^2) - rho^{(p-1)/2}/(p+1)) R^{d-1} dR
/// over the field's grid extent, gradients by 5-point finite differences.
double full_energy(const PhysicalField& field, const ProblemParams& params);

}  // namespace nlsprof
