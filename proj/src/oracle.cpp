#include "nlsprof/oracle.hpp"

#include <stdexcept>

namespace nlsprof::oracle {
namespace {

// Coefficient of e^{n xi} in the first pre-inversion equation,
//   U' + U U' - a S S' + r U + U^2 - a S^2 = 0          (even orders)
// computed from the stored coefficients; entries at `skip` are treated as
// unknown (coefficient zero).  Primes contribute a factor of the index.
Rational eq_u_order(const ExactSeries& c, int n, int skip_s) {
  const Rational a = c.params.alpha;
  const Rational r = c.params.r;
  Rational acc = Rational(n) * c.u(n);
  for (int i = 0; i <= n; i += 2) {
    const int j = n - i;
    if (j >= 0) acc += c.u(i) * Rational(j) * c.u(j);
  }
  for (int i = -1; i <= n + 2; i += 2) {
    const int j = n - i;
    if (j < -1) continue;
    if (i == skip_s || j == skip_s) continue;
    acc -= a * c.s(i) * Rational(j) * c.s(j);
  }
  acc += r * c.u(n);
  for (int i = 0; i <= n; i += 2) {
    const int j = n - i;
    if (j >= 0) acc += c.u(i) * c.u(j);
  }
  for (int i = -1; i <= n + 2; i += 2) {
    const int j = n - i;
    if (j < -1) continue;
    if (i == skip_s || j == skip_s) continue;
    acc -= a * c.s(i) * c.s(j);
  }
  return acc;
}

// Second pre-inversion equation,
//   S' + U S' + a S U' + r S + U S + a d U S = 0        (odd orders)
Rational eq_s_order(const ExactSeries& c, int n, int skip_u) {
  const Rational a = c.params.alpha;
  const Rational r = c.params.r;
  const Rational ad1 = Rational(1) + a * c.params.d;
  Rational acc = Rational(n) * c.s(n);
  for (int i = 0; i <= n + 1; i += 2) {
    const int j = n - i;
    if (j < -1 || i == skip_u) continue;
    acc += c.u(i) * Rational(j) * c.s(j);
  }
  for (int i = -1; i <= n; i += 2) {
    const int j = n - i;
    if (j < 0 || j == skip_u) continue;
    acc += a * c.s(i) * Rational(j) * c.u(j);
  }
  acc += r * c.s(n);
  for (int i = 0; i <= n + 1; i += 2) {
    const int j = n - i;
    if (j < -1 || i == skip_u) continue;
    acc += ad1 * c.u(i) * c.s(j);
  }
  return acc;
}

}  // namespace

ExactSeries exact_coefficients(const RationalParams& params, int n_max) {
  if (n_max < 0 || n_max % 2 != 0)
    throw std::invalid_argument("exact_coefficients: n_max must be even and >= 0");
  if (params.alpha <= 0 || params.d < 1)
    throw std::invalid_argument("exact_coefficients: need alpha > 0, d >= 1");

  ExactSeries c;
  c.params = params;
  c.n_max = n_max;
  c.s_coef[-1] = 1;

  const Rational a = params.alpha;
  // Odd order n closes U_{n+1} with coefficient a (n+1+d); even order n
  // closes S_{n+1} with coefficient -a (n+2).  Both stay nonzero.
  for (int n = -1; n <= n_max - 1; ++n) {
    if (n % 2 != 0) {
      const Rational known = eq_s_order(c, n, /*skip_u=*/n + 1);
      c.u_coef[n + 1] = -known / (a * Rational(n + 1 + params.d));
    } else {
      const Rational known = eq_u_order(c, n, /*skip_s=*/n + 1);
      c.s_coef[n + 1] = known / (a * Rational(n + 2));
    }
  }
  return c;
}

std::tuple<Rational, Rational, Rational> exact_field(const Rational& u, const Rational& s,
                                                     const RationalParams& params) {
  const Rational a = params.alpha;
  const Rational r = params.r;
  const int d = params.d;
  const Rational D = (1 + u) * (1 + u) + a * a * s * s;
  const Rational nu = -a * a * d * s * s * u - a * (r - 1) * s * s - u * (u + 1) * (r + u);
  const Rational ns =
      -a * a * s * s * s + s * u * (-a * d + a * r - r - 1) + s * u * u * (-a * d + a - 1) - r * s;
  return {D, nu, ns};
}

int first_nonzero_residual_order(const ExactSeries& series) {
  for (int n = -2; n <= series.n_max - 2; ++n) {
    const Rational res =
        (n % 2 == 0 || n == -2) ? eq_u_order(series, n, series.n_max + 2)
                                : eq_s_order(series, n, series.n_max + 2);
    if (res != 0) return n;
  }
  return series.n_max - 1;
}

std::tuple<HighPrec, HighPrec, HighPrec> highprec_field(double u_in, double s_in, int d,
                                                        double alpha, double r_in) {
  const HighPrec u = u_in, s = s_in, a = alpha, r = r_in;
  const HighPrec D = (1 + u) * (1 + u) + a * a * s * s;
  const HighPrec nu = -a * a * d * s * s * u - a * (r - 1) * s * s - u * (u + 1) * (r + u);
  const HighPrec ns =
      -a * a * s * s * s + s * u * (-a * d + a * r - r - 1) + s * u * u * (-a * d + a - 1) - r * s;
  return {D, nu, ns};
}

}  // namespace nlsprof::oracle
