#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsprof {

/// Parameters of the radial self-similar profile problem together with the
/// derived constants that every other component consumes.
///
/// d is the spatial dimension, p > 1 the nonlinearity exponent and r > 0 the
/// self-similar scaling exponent.  Derived fields:
///   alpha = (p - 1) / 4
///   gamma = (p + 1) / 2
///   s_c   = d/2 - 2/(p - 1)   (scaling-critical Sobolev index)
struct ProblemParams {
  int d = 3;
  double p = 3.0;
  double r = 2.1;
  double alpha = 0.5;
  double gamma = 2.0;
  double s_c = 0.5;
};

enum class BarrierCondition { Strict, Degenerate, Violated };

inline const char* to_string(BarrierCondition c) {
  switch (c) {
    case BarrierCondition::Strict: return "strict";
    case BarrierCondition::Degenerate: return "degenerate";
    case BarrierCondition::Violated: return "violated";
  }
  return "?";
}

/// Regime classification of a parameter tuple.
///
/// supercritical_mass: s_c > 0, equivalently p > 1 + 4/d.
/// r_window:           r > 2, needed so the e^{(4-2r)s} correction decays.
/// barrier_condition:  sign of alpha*d - (r-1), which decides whether the
///                     profile starts to the right of the U = -1 barrier
///                     (strict), on it (degenerate) or to its left (violated).
/// odd_integer_p:      informational flag; smooth-extension statements are
///                     only asserted when p is an odd natural number.
struct RegimeVerdict {
  bool supercritical_mass = false;
  bool r_window = false;
  BarrierCondition barrier_condition = BarrierCondition::Violated;
  bool odd_integer_p = false;
};

/// Relative tolerance used to detect the degenerate case alpha*d = r-1.
inline constexpr double kDegeneracyTol = 1e-12;

inline ProblemParams new_params(int d, double p, double r) {
  if (d < 1) throw std::invalid_argument("new_params: d must be a positive integer");
  if (!(p > 1.0)) throw std::invalid_argument("new_params: p must exceed 1 (alpha > 0)");
  if (!(r > 0.0)) throw std::invalid_argument("new_params: r must be positive");
  if (!std::isfinite(p) || !std::isfinite(r))
    throw std::invalid_argument("new_params: p, r must be finite");
  ProblemParams q;
  q.d = d;
  q.p = p;
  q.r = r;
  q.alpha = (p - 1.0) / 4.0;
  q.gamma = (p + 1.0) / 2.0;
  q.s_c = 0.5 * d - 2.0 / (p - 1.0);
  return q;
}

inline RegimeVerdict classify(const ProblemParams& q) {
  RegimeVerdict v;
  v.supercritical_mass = q.s_c > 0.0;
  v.r_window = q.r > 2.0;
  const double ad = q.alpha * q.d;
  const double gap = ad - (q.r - 1.0);
  if (std::abs(gap) <= kDegeneracyTol * std::max(1.0, ad))
    v.barrier_condition = BarrierCondition::Degenerate;
  else
    v.barrier_condition = gap > 0.0 ? BarrierCondition::Strict : BarrierCondition::Violated;
  const double pr = std::round(q.p);
  v.odd_integer_p = q.p == pr && std::fmod(pr, 2.0) == 1.0 && pr >= 1.0;
  return v;
}

/// Open interval of r values for which a given (d, p) satisfies all the
/// hypotheses at once: r > 2 and alpha*d > r - 1.  Nonempty exactly when
/// p > 1 + 4/d (the mass supercritical range).
struct RInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
  bool contains(double r) const { return lo < r && r < hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

inline RInterval admissible_r_interval(int d, double p) {
  if (d < 1 || !(p > 1.0)) throw std::invalid_argument("admissible_r_interval: need d >= 1, p > 1");
  const double ad = (p - 1.0) / 4.0 * d;
  return RInterval{2.0, ad + 1.0};
}

}  // namespace nlsprof
