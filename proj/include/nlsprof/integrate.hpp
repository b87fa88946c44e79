#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlsprof/params.hpp"
#include "nlsprof/phase.hpp"
#include "nlsprof/series.hpp"

namespace nlsprof {

enum class Termination : std::uint8_t {
  ReachedXiEnd,
  ConvergedToOrigin,
  BarrierCrossed,
  Diverged,
  Singularity,
};

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedXiEnd: return "reached_xi_end";
    case Termination::ConvergedToOrigin: return "converged_to_origin";
    case Termination::BarrierCrossed: return "barrier_crossed";
    case Termination::Diverged: return "diverged";
    case Termination::Singularity: return "singularity";
  }
  return "?";
}

struct BarrierEvent {
  Barrier which = Barrier::UMinusOne;
  double xi = 0.0;      // crossing location, localized to 1e-12 in xi
  double u_bar = 0.0;
  double s_bar = 0.0;
};

/// Result of an adaptive integration: accepted samples at strictly
/// increasing xi, the field value at each sample, step counters, barrier
/// events, and the reason the run ended.
struct Trajectory {
  ProblemParams params;
  std::vector<PhaseState> samples;
  std::vector<FieldValue> derivatives;
  std::vector<BarrierEvent> events;
  long steps_accepted = 0;
  long steps_rejected = 0;
  Termination termination = Termination::ReachedXiEnd;

  const PhaseState& front() const { return samples.front(); }
  const PhaseState& back() const { return samples.back(); }
  std::size_t size() const { return samples.size(); }
};

struct IntegrateOptions {
  double tol = 1e-10;        // per-step relative and absolute tolerance
  double max_step = 0.5;
  double convergence_threshold = 0.0;  // <= 0: derived as 1e-10 max(1, |U_0|)
  double divergence_guard = 0.0;       // <= 0: derived as 10 (1 + r + |U_0| + S(xi_start))
  bool stop_at_barrier = true;         // record the event and stop
};

/// Continues a state by the embedded Dormand-Prince 5(4) pair with PI step
/// control.  Monitors sign changes of U+1 and U across accepted steps
/// (localized by bisection on the dense cubic to 1e-12 in xi), convergence
/// to the origin, the 1e-8 neighbourhood of the singular point (-1, 0) and
/// the divergence guard.
Trajectory integrate_from_state(const ProblemParams& params, const PhaseState& initial,
                                double xi_end, const IntegrateOptions& opts);

/// Series-seeded entry point: requires xi_start <= -log 8 - 0.1 and a series
/// tail bound at xi_start below tol/10.
Trajectory integrate(const ProblemParams& params, const SeriesCoefficients& coeffs,
                     double xi_start, double xi_end, double tol);

/// Max over interior samples of |D u' - N_U| + |D s' - N_S| with the
/// derivatives taken from finite differences on the sample grid (5-point
/// stencils away from the ends, 4th order on smooth data).
double residual_norm(const Trajectory& traj, const ProblemParams& params);

struct DecayFit {
  double rate_u = 0.0;
  double rate_s = 0.0;
  double log_coef_u = 0.0;  // coefficient of log(xi) in the fit
  double log_coef_s = 0.0;
  int n_used = 0;
};

/// Fits log |y| = a + lambda xi + b log xi on a tail window and reports
/// lambda for both components.  Samples where the component vanishes or
/// flips sign are dropped; fewer than 8 usable samples is an error.
/// The window must sit at positive xi (the log-correction term).
DecayFit decay_fit(const Trajectory& traj, double xi_lo, double xi_hi);

/// Integrates from the series state at xi_a to xi_b (both inside the series
/// region) and returns the euclidean distance to the series value at xi_b.
double matching_consistency(const ProblemParams& params, const SeriesCoefficients& coeffs,
                            double xi_a, double xi_b, double tol);

}  // namespace nlsprof
