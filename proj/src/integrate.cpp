#include "nlsprof/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlsprof/numerics.hpp"

namespace nlsprof {
namespace {

struct Vec2 {
  double u, s;
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bhat, the embedded error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSingularRadius = 1e-8;
constexpr double kEventTol = 1e-12;

double norm2(double u, double s) { return std::hypot(u, s); }

// Sign with an exact-zero third state so that a trajectory sitting exactly
// on a barrier is not reported as crossing it.
int sgn(double x) { return (x > 0.0) - (x < 0.0); }

class Stepper {
 public:
  Stepper(const ProblemParams& params, const IntegrateOptions& opts)
      : params_(params), tol_(opts.tol) {}

  Vec2 eval(double u, double s, FieldValue* fv = nullptr) const {
    const FieldValue f = field(u, s, params_);
    if (fv) *fv = f;
    return {f.dU, f.dS};
  }

  // One trial step from (x, y) with derivative k1; on success fills y_new,
  // k_new (FSAL, with the field value for the sample record) and the scaled
  // error estimate.
  void attempt(double x, Vec2 y, Vec2 k1, double h, Vec2& y_new, Vec2& k_new, FieldValue& f_new,
               double& err) const {
    (void)x;  // autonomous field
    const Vec2 k2 = eval(y.u + h * a21 * k1.u, y.s + h * a21 * k1.s);
    const Vec2 k3 = eval(y.u + h * (a31 * k1.u + a32 * k2.u), y.s + h * (a31 * k1.s + a32 * k2.s));
    const Vec2 k4 = eval(y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                         y.s + h * (a41 * k1.s + a42 * k2.s + a43 * k3.s));
    const Vec2 k5 = eval(y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                         y.s + h * (a51 * k1.s + a52 * k2.s + a53 * k3.s + a54 * k4.s));
    const Vec2 k6 =
        eval(y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
             y.s + h * (a61 * k1.s + a62 * k2.s + a63 * k3.s + a64 * k4.s + a65 * k5.s));
    y_new.u = y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u);
    y_new.s = y.s + h * (b1 * k1.s + b3 * k3.s + b4 * k4.s + b5 * k5.s + b6 * k6.s);
    k_new = eval(y_new.u, y_new.s, &f_new);
    const double eu =
        h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k_new.u);
    const double es =
        h * (e1 * k1.s + e3 * k3.s + e4 * k4.s + e5 * k5.s + e6 * k6.s + e7 * k_new.s);
    const double su = tol_ + tol_ * std::max(std::abs(y.u), std::abs(y_new.u));
    const double ss = tol_ + tol_ * std::max(std::abs(y.s), std::abs(y_new.s));
    const double ru = eu / su;
    const double rs = es / ss;
    err = std::sqrt(0.5 * (ru * ru + rs * rs));
  }

 private:
  const ProblemParams& params_;
  double tol_;
};

// Bisection on the cubic interpolant of g(xi) = component + offset over an
// accepted step, down to kEventTol in xi.
double localize(double xa, double xb, double ya, double yb, double da, double db, double offset) {
  auto g = [&](double x) { return hermite_value(x, xa, xb, ya, yb, da, db) + offset; };
  double lo = xa, hi = xb;
  double glo = ya + offset;
  for (int it = 0; it < 200 && hi - lo > kEventTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (sgn(gm) == sgn(glo) && gm != 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Trajectory integrate_from_state(const ProblemParams& params, const PhaseState& initial,
                                double xi_end, const IntegrateOptions& opts) {
  if (!(xi_end > initial.xi)) throw std::invalid_argument("integrate: xi_end must exceed xi_start");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");

  const double u0_scale = std::abs(initial.u_bar);
  const double conv_thresh = opts.convergence_threshold > 0.0
                                 ? opts.convergence_threshold
                                 : 1e-10 * std::max(1.0, u0_scale);
  const double guard = opts.divergence_guard > 0.0
                           ? opts.divergence_guard
                           : 10.0 * (1.0 + params.r + u0_scale + std::abs(initial.s_bar));

  Stepper stepper(params, opts);
  Trajectory traj;
  traj.params = params;

  double x = initial.xi;
  Vec2 y{initial.u_bar, initial.s_bar};
  FieldValue f_cur;
  Vec2 k1 = stepper.eval(y.u, y.s, &f_cur);
  traj.samples.push_back({x, y.u, y.s});
  traj.derivatives.push_back(f_cur);

  // early exits that hold already at the seed
  if (norm2(y.u, y.s) < conv_thresh) {
    traj.termination = Termination::ConvergedToOrigin;
    return traj;
  }

  // Companion cap on the step so the sample grid supports 4th-order
  // differentiation at the trajectory's own scale: the residual of a
  // 5-point stencil is ~ D |y|^(5) h^4 / 30, so h^4 ~ tol / (D (1 + |y|))
  // keeps it proportional to tol.
  const auto fd_cap = [&](const Vec2& state, double D) {
    return std::pow(30.0 * opts.tol / (D * (1.0 + norm2(state.u, state.s))), 0.25);
  };

  // initial step: conservative, refined by the controller
  double h = std::min({opts.max_step, fd_cap(y, f_cur.D),
                       0.01 / std::max(1.0, std::max(std::abs(k1.u), std::abs(k1.s)))});
  const double expo = 0.7 / 5.0;
  const double expo_prev = 0.4 / 5.0;
  double err_prev = 1.0;

  while (x < xi_end) {
    if (xi_end - x <= 1e-12 * std::max(1.0, std::abs(xi_end))) break;
    h = std::min(h, fd_cap(y, f_cur.D));
    bool final_step = false;
    if (h >= xi_end - x) {
      h = xi_end - x;
      final_step = true;
    }
    Vec2 y_new, k_new;
    FieldValue f_new;
    double err;
    bool step_failed = false;
    try {
      stepper.attempt(x, y, k1, h, y_new, k_new, f_new, err);
    } catch (const std::domain_error&) {
      // a stage hit the singular point; retry shorter
      step_failed = true;
      err = 10.0;
    }
    if (!step_failed && !std::isfinite(err)) {
      step_failed = true;
      err = 10.0;
    }

    if (err <= 1.0) {
      const double x_new = final_step ? xi_end : x + h;

      // barrier monitors on U+1 and U
      const int s_m1_a = sgn(y.u + 1.0), s_m1_b = sgn(y_new.u + 1.0);
      const int s_0_a = sgn(y.u), s_0_b = sgn(y_new.u);
      std::optional<BarrierEvent> ev;
      if (s_m1_a * s_m1_b < 0) {
        const double xc = localize(x, x_new, y.u, y_new.u, k1.u, k_new.u, 1.0);
        ev = BarrierEvent{Barrier::UMinusOne, xc,
                          hermite_value(xc, x, x_new, y.u, y_new.u, k1.u, k_new.u),
                          hermite_value(xc, x, x_new, y.s, y_new.s, k1.s, k_new.s)};
      } else if (s_0_a * s_0_b < 0) {
        const double xc = localize(x, x_new, y.u, y_new.u, k1.u, k_new.u, 0.0);
        ev = BarrierEvent{Barrier::UZero, xc,
                          hermite_value(xc, x, x_new, y.u, y_new.u, k1.u, k_new.u),
                          hermite_value(xc, x, x_new, y.s, y_new.s, k1.s, k_new.s)};
      }

      x = x_new;
      y = y_new;
      k1 = k_new;
      f_cur = f_new;
      ++traj.steps_accepted;
      traj.samples.push_back({x, y.u, y.s});
      traj.derivatives.push_back(f_new);

      if (ev) {
        traj.events.push_back(*ev);
        if (opts.stop_at_barrier) {
          traj.termination = Termination::BarrierCrossed;
          return traj;
        }
      }
      if (norm2(y.u, y.s) < conv_thresh) {
        traj.termination = Termination::ConvergedToOrigin;
        return traj;
      }
      if (norm2(y.u + 1.0, y.s) < kSingularRadius) {
        traj.termination = Termination::Singularity;
        return traj;
      }
      if (norm2(y.u, y.s) > guard) {
        traj.termination = Termination::Diverged;
        return traj;
      }

      // PI controller
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -expo) * std::pow(err_prev, expo_prev);
      fac = std::clamp(fac, 0.2, 5.0);
      h = std::min(h * fac, opts.max_step);
      err_prev = e;
    } else {
      ++traj.steps_rejected;
      const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
      h *= std::min(fac, 1.0);
      if (h < 1e-14 * std::max(1.0, std::abs(x))) {
        // step size collapse next to the singular set
        traj.termination = Termination::Singularity;
        return traj;
      }
    }
  }

  traj.termination = Termination::ReachedXiEnd;
  return traj;
}

Trajectory integrate(const ProblemParams& params, const SeriesCoefficients& coeffs,
                     double xi_start, double xi_end, double tol) {
  if (!(xi_start <= -std::log(8.0) - 0.1))
    throw std::invalid_argument("integrate: xi_start must be <= -log(8) - 0.1");
  const SeriesValue v = evaluate(coeffs, xi_start);
  if (!(v.tail_bound < tol / 10.0))
    throw std::invalid_argument(
        "integrate: series tail bound at xi_start exceeds tol/10; lower xi_start or raise n_max");
  IntegrateOptions opts;
  opts.tol = tol;
  opts.convergence_threshold = 1e-10 * std::max(1.0, std::abs(coeffs.u(0)));
  return integrate_from_state(params, v.state, xi_end, opts);
}

double residual_norm(const Trajectory& traj, const ProblemParams& params) {
  (void)params;  // field values are stored on the trajectory
  const std::size_t n = traj.size();
  if (n < 3) throw std::invalid_argument("residual_norm: need at least 3 samples");
  const int stencil = n >= 5 ? 5 : 3;
  const int half = stencil / 2;

  double worst = 0.0;
  std::vector<double> xs(stencil);
  for (std::size_t i = half; i + half < n; ++i) {
    for (int j = 0; j < stencil; ++j) xs[j] = traj.samples[i - half + j].xi;
    const auto w = fornberg_weights(traj.samples[i].xi, xs, 1);
    double du = 0.0, ds = 0.0;
    for (int j = 0; j < stencil; ++j) {
      du += w[j] * traj.samples[i - half + j].u_bar;
      ds += w[j] * traj.samples[i - half + j].s_bar;
    }
    const FieldValue& f = traj.derivatives[i];
    const double res = std::abs(f.D * du - f.N_U) + std::abs(f.D * ds - f.N_S);
    worst = std::max(worst, res);
  }
  return worst;
}

DecayFit decay_fit(const Trajectory& traj, double xi_lo, double xi_hi) {
  if (!(xi_lo < xi_hi)) throw std::invalid_argument("decay_fit: empty window");
  if (!(xi_lo > 0.0))
    throw std::invalid_argument("decay_fit: window must sit at positive xi");

  DecayFit out;
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    int last_sign = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double xi = traj.samples[i].xi;
      if (xi < xi_lo || xi > xi_hi) continue;
      const double val = comp == 0 ? traj.samples[i].u_bar : traj.samples[i].s_bar;
      const int sg = sgn(val);
      if (sg == 0) continue;              // log undefined, drop
      if (last_sign != 0 && sg != last_sign) continue;  // sign change, drop
      last_sign = sg;
      a.push_back({1.0, xi, std::log(xi)});
      b.push_back(std::log(std::abs(val)));
    }
    if (a.size() < 8)
      throw std::runtime_error("decay_fit: fewer than 8 usable samples in the window");
    const auto fit = least_squares(a, b);
    if (comp == 0) {
      out.rate_u = fit[1];
      out.log_coef_u = fit[2];
      out.n_used = static_cast<int>(a.size());
    } else {
      out.rate_s = fit[1];
      out.log_coef_s = fit[2];
    }
  }
  return out;
}

double matching_consistency(const ProblemParams& params, const SeriesCoefficients& coeffs,
                            double xi_a, double xi_b, double tol) {
  if (!(xi_a <= xi_b)) throw std::invalid_argument("matching_consistency: need xi_a <= xi_b");
  if (!(xi_b <= -std::log(8.0) - 0.1))
    throw std::invalid_argument("matching_consistency: xi_b must stay in the series region");
  const SeriesValue va = evaluate(coeffs, xi_a);
  const SeriesValue vb = evaluate(coeffs, xi_b);
  if (xi_a == xi_b) return 0.0;
  IntegrateOptions opts;
  opts.tol = tol;
  opts.convergence_threshold = 1e-300;  // never triggers inside the series region
  const Trajectory t = integrate_from_state(params, va.state, xi_b, opts);
  const PhaseState& end = t.back();
  return norm2(end.u_bar - vb.state.u_bar, end.s_bar - vb.state.s_bar);
}

}  // namespace nlsprof
