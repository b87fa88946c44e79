#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <vector>

#include "nlsprof/params.hpp"

namespace nlsprof {

struct PhaseState {
  double xi = 0.0;
  double u_bar = 0.0;
  double s_bar = 0.0;
};

using BigInt = boost::multiprecision::cpp_int;

/// Empirical check of the trilinear majorant bound.
///
/// c_trilinear: smallest C with p_{n+2} <= C * sum p_i p_j p_{n-i-j}
///              (indices >= -1 and <= n+1) over all computed orders.
/// k_growth:    max_n p_bar_n / 8^n, the constant in the geometric tail bound.
/// rate:        geometric growth rate of p_bar fitted on the last quarter of
///              the computed indices; ok iff rate <= 8.
struct MajorantReport {
  bool ok = false;
  double k_growth = 0.0;
  double c_trilinear = 0.0;
  double rate = 0.0;
};

/// Taylor coefficients of the profile pair around xi = -inf,
///
///   Ubar(xi) = sum_{n even >= 0} U_n e^{n xi},
///   Sbar(xi) = sum_{n odd >= -1} S_n e^{n xi},    S_{-1} = 1,
///
/// together with the running majorant p_bar_n = max_{i <= n} (1 + |coef_i|).
/// Coefficient maps are parity filtered: u_coef holds even indices in
/// [0, n_max], s_coef odd indices in [-1, n_max - 1].  The majorant report
/// is cached at construction; mutate the maps and it goes stale.
struct SeriesCoefficients {
  ProblemParams params;
  int n_max = 0;
  std::map<int, double> u_coef;
  std::map<int, double> s_coef;
  std::map<int, double> p_bar;
  MajorantReport majorant;

  double u(int n) const {
    auto it = u_coef.find(n);
    return it == u_coef.end() ? 0.0 : it->second;
  }
  double s(int n) const {
    auto it = s_coef.find(n);
    return it == s_coef.end() ? 0.0 : it->second;
  }
};

/// Per-order intermediates of the recursion, exposed for debugging.
struct RecursionStep {
  int n = 0;             // order being closed; even solves U_{n+2}, odd S_{n+2}
  double n_tilde = 0.0;  // numerator convolution with the top term removed
  double d_tilde = 0.0;  // derivative-side convolution with the top term removed
  double lhs_factor = 0.0;
  double solved = 0.0;
};

/// Runs the coefficient recursion up to order n_max (even).  Requires only
/// alpha > 0 and d >= 1; the left-hand factors alpha^2 (n+2+d) and
/// alpha^2 (n+3) are then positive for every n >= -2.  Throws on odd n_max
/// and on coefficient overflow (diagnostic names the failing index).
SeriesCoefficients compute_coefficients(const ProblemParams& params, int n_max,
                                        std::vector<RecursionStep>* debug = nullptr);

/// Recomputes the majorant report from the stored coefficients.
MajorantReport majorant_check(const SeriesCoefficients& coeffs);

struct SeriesValue {
  PhaseState state;
  double tail_bound = 0.0;
};

/// Evaluates the truncated series at xi.  Requires e^{xi} < 1/8 (the proven
/// convergence region) and a passing majorant check; the returned tail bound
/// is K (8 e^xi)^{n_max+1} / (1 - 8 e^xi) with K the fitted constant.
SeriesValue evaluate(const SeriesCoefficients& coeffs, double xi);

/// Ternary-tree numbers: c_0 = 1, c_{n+1} = sum_{i+j+k=n} c_i c_j c_k.
/// Exact integer arithmetic.
BigInt tri_catalan(int n);

namespace detail {
/// Recursion with a free seed S_{-1} = s_minus_1 (the scaling symmetry);
/// the public entry point fixes s_minus_1 = 1.
SeriesCoefficients compute_coefficients_seeded(const ProblemParams& params, int n_max,
                                               double s_minus_1,
                                               std::vector<RecursionStep>* debug = nullptr);
}  // namespace detail

}  // namespace nlsprof
