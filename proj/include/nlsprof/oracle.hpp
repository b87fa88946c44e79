#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <tuple>

#include "nlsprof/params.hpp"

namespace nlsprof::oracle {

using Rational = boost::multiprecision::cpp_rational;
using HighPrec = boost::multiprecision::cpp_bin_float_50;

/// Exact mirror of ProblemParams for rational alpha, r.
struct RationalParams {
  int d = 3;
  Rational alpha{1, 2};
  Rational r{21, 10};
};

inline RationalParams make_rational_params(int d, long alpha_num, long alpha_den, long r_num,
                                           long r_den) {
  RationalParams q{d, Rational(alpha_num, alpha_den), Rational(r_num, r_den)};
  if (q.d < 1 || q.alpha <= 0 || q.r <= 0)
    throw std::invalid_argument("make_rational_params: need d >= 1, alpha > 0, r > 0");
  return q;
}

struct ExactSeries {
  RationalParams params;
  int n_max = 0;
  std::map<int, Rational> u_coef;  // even n in [0, n_max]
  std::map<int, Rational> s_coef;  // odd n in [-1, n_max - 1]

  Rational u(int n) const {
    auto it = u_coef.find(n);
    return it == u_coef.end() ? Rational(0) : it->second;
  }
  Rational s(int n) const {
    auto it = s_coef.find(n);
    return it == s_coef.end() ? Rational(0) : it->second;
  }
};

/// Exact coefficient sequences, derived order by order from the
/// pre-inversion equations (no D multiplication, no top-term extraction) --
/// an independent route to the same triangular system.
ExactSeries exact_coefficients(const RationalParams& params, int n_max);

/// Exact evaluation of D, N_U, N_S at a rational point.
std::tuple<Rational, Rational, Rational> exact_field(const Rational& u, const Rational& s,
                                                     const RationalParams& params);

/// Residual of the truncated exact series in the pre-inversion equations as
/// formal power series: largest order <= n_max - 2 with a nonzero
/// coefficient, or n_max - 1 if all vanish (exact zeros expected).
int first_nonzero_residual_order(const ExactSeries& series);

/// High-precision (50 significant digits) evaluation of D, N_U, N_S for
/// irrational parameter cross-checks, flagged apart from the exact route.
std::tuple<HighPrec, HighPrec, HighPrec> highprec_field(double u, double s, int d, double alpha,
                                                        double r);

}  // namespace nlsprof::oracle
