#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nlsprof/numerics.hpp"
#include "nlsprof/oracle.hpp"
#include "nlsprof/series.hpp"

using namespace nlsprof;
using testutil::rel_close;

namespace {

// Residual of the truncated float series in the pre-inversion equations,
// computed as plain convolutions (independent of the recursion kernel).
// Returns the largest |residual| / p_bar over orders <= n_max - 2.
double worst_scaled_residual(const SeriesCoefficients& c) {
  const double a = c.params.alpha;
  const double r = c.params.r;
  const int d = c.params.d;
  double worst = 0.0;
  for (int n = -2; n <= c.n_max - 2; ++n) {
    double acc = 0.0;
    if (n % 2 == 0) {
      acc += n * c.u(n);
      for (int i = 0; i <= n; i += 2)
        if (n - i >= 0) acc += c.u(i) * (n - i) * c.u(n - i);
      for (int i = -1; i <= n + 2; i += 2)
        if (n - i >= -1) acc -= a * c.s(i) * (n - i) * c.s(n - i);
      acc += r * c.u(n);
      for (int i = 0; i <= n; i += 2)
        if (n - i >= 0) acc += c.u(i) * c.u(n - i);
      for (int i = -1; i <= n + 2; i += 2)
        if (n - i >= -1) acc -= a * c.s(i) * c.s(n - i);
    } else {
      acc += n * c.s(n);
      for (int i = 0; i <= n + 1; i += 2)
        if (n - i >= -1) acc += c.u(i) * (n - i) * c.s(n - i);
      for (int i = -1; i <= n; i += 2)
        if (n - i >= 0) acc += a * c.s(i) * (n - i) * c.u(n - i);
      acc += r * c.s(n);
      for (int i = 0; i <= n + 1; i += 2)
        if (n - i >= -1) acc += (1.0 + a * d) * c.u(i) * c.s(n - i);
    }
    const double pb = c.p_bar.at(std::min(std::max(n, -1), c.n_max));
    worst = std::max(worst, std::abs(acc) / pb);
  }
  return worst;
}

}  // namespace

TEST_CASE("normalization and leading coefficients") {
  for (const auto& [d, p, r] : {std::tuple{3, 3.0, 2.1}, {3, 10.0 / 3.0, 2.1}, {2, 5.0, 2.2}}) {
    const auto q = new_params(d, p, r);
    const auto c = compute_coefficients(q, 12);
    CHECK(c.s(-1) == 1.0);  // exact
    CHECK(rel_close(c.u(0), -(r - 1.0) / (q.alpha * q.d), 1e-14));
  }
  // (d=3, p=3, r=21/10): U_0 = -11/15
  const auto c = compute_coefficients(new_params(3, 3.0, 2.1), 8);
  CHECK(rel_close(c.u(0), -11.0 / 15.0, 1e-15));
}

TEST_CASE("first orders against the exact-rational oracle") {
  const auto rp = oracle::make_rational_params(3, 1, 2, 21, 10);
  const auto exact = oracle::exact_coefficients(rp, 8);
  CHECK(exact.u(0) == oracle::Rational(-11, 15));
  CHECK(exact.s(1) == oracle::Rational(-451, 450));
  CHECK(exact.u(2) == oracle::Rational(3608, 16875));
  CHECK(exact.s(3) == oracle::Rational(-50963, 135000));

  const auto c = compute_coefficients(new_params(3, 3.0, 2.1), 8);
  CHECK(rel_close(c.s(1), static_cast<double>(exact.s(1)), 1e-13));
  CHECK(rel_close(c.u(2), static_cast<double>(exact.u(2)), 1e-13));
  CHECK(rel_close(c.s(3), static_cast<double>(exact.s(3)), 1e-13));
}

TEST_CASE("argument validation") {
  const auto q = new_params(3, 3.0, 2.1);
  CHECK_THROWS_AS(compute_coefficients(q, 7), std::invalid_argument);
  CHECK_THROWS_AS(compute_coefficients(q, -2), std::invalid_argument);
  // overflow diagnostic: a vanishing seed drives the division scale to zero
  CHECK_THROWS_AS(detail::compute_coefficients_seeded(q, 4, 0.0), std::overflow_error);
}

TEST_CASE("evaluation near xi -> -inf recovers the leading terms") {
  const auto q = new_params(3, 3.0, 2.1);
  const auto c = compute_coefficients(q, 40);
  const auto v = evaluate(c, -40.0);
  CHECK(std::abs(v.state.u_bar - c.u(0)) < 1e-30);
  CHECK(std::abs(std::exp(-40.0) * v.state.s_bar - 1.0) < 1e-30);
}

TEST_CASE("evaluation domain") {
  const auto c = compute_coefficients(new_params(3, 3.0, 2.1), 8);
  CHECK_THROWS_AS(evaluate(c, -std::log(8.0)), std::domain_error);
  CHECK_THROWS_AS(evaluate(c, 0.0), std::domain_error);
  CHECK_NOTHROW(evaluate(c, -std::log(8.0) - 1e-6));
}

TEST_CASE("truncation self-consistency sits below the tail bound") {
  const auto q = new_params(3, 3.0, 2.1);
  const auto c20 = compute_coefficients(q, 20);
  const auto c40 = compute_coefficients(q, 40);
  const double xi = -std::log(16.0);
  const auto v20 = evaluate(c20, xi);
  const auto v40 = evaluate(c40, xi);
  CHECK(std::abs(v20.state.u_bar - v40.state.u_bar) < v20.tail_bound);
  CHECK(std::abs(v20.state.s_bar - v40.state.s_bar) < v20.tail_bound);
  CHECK(v20.tail_bound > 0.0);
}

TEST_CASE("parity: odd-index U entries are inert") {
  const auto q = new_params(3, 3.0, 2.1);
  auto c = compute_coefficients(q, 20);
  const auto v0 = evaluate(c, -3.0);
  c.u_coef[1] = 0.7;  // parity-violating injection
  const auto v1 = evaluate(c, -3.0);
  CHECK(v0.state.u_bar == v1.state.u_bar);
  CHECK(v0.state.s_bar == v1.state.s_bar);
  c.u_coef[1] = 0.0;
  const auto v2 = evaluate(c, -3.0);
  CHECK(v0.state.u_bar == v2.state.u_bar);
}

TEST_CASE("ternary tree numbers") {
  CHECK(tri_catalan(0) == 1);
  CHECK(tri_catalan(1) == 1);
  CHECK(tri_catalan(2) == 3);
  CHECK(tri_catalan(3) == 12);
  CHECK(tri_catalan(4) == 55);

  // closed form binom(3n, n) / (2n + 1), computed independently
  for (int n = 0; n <= 20; ++n) {
    BigInt binom = 1;
    for (int k = 1; k <= n; ++k) binom = binom * (3 * n - k + 1) / k;
    CHECK(tri_catalan(n) * (2 * n + 1) == binom);
  }

  BigInt pw = 1;
  for (int n = 0; n <= 64; ++n, pw *= 8) CHECK(tri_catalan(n) <= pw);

  CHECK_THROWS_AS(tri_catalan(-1), std::invalid_argument);
}

TEST_CASE("majorant check") {
  const auto q = new_params(3, 3.0, 2.1);
  const auto c60 = compute_coefficients(q, 60);
  const auto rep = majorant_check(c60);
  CHECK(rep.ok);
  CHECK(rep.rate <= 8.0);
  CHECK(rep.k_growth > 0.0);
  CHECK(rep.c_trilinear > 0.0);

  auto corrupted = c60;
  corrupted.u_coef[40] = 1e30;
  double running = 0.0;
  for (int n = -1; n <= corrupted.n_max; ++n) {
    const double pn = 1.0 + std::abs(n % 2 == 0 ? corrupted.u(n) : corrupted.s(n));
    running = std::max(running, pn);
    corrupted.p_bar[n] = running;
  }
  CHECK_FALSE(majorant_check(corrupted).ok);

  const auto c0 = compute_coefficients(q, 0);
  CHECK(majorant_check(c0).ok);
}

TEST_CASE("recursion residual vanishes order by order") {
  for (const auto& [d, p, r] : {std::tuple{3, 3.0, 2.1}, {3, 10.0 / 3.0, 2.1}, {1, 9.0, 2.5}}) {
    const auto c = compute_coefficients(new_params(d, p, r), 40);
    CHECK(worst_scaled_residual(c) <= 1e-10);
  }
}

TEST_CASE("scaling symmetry: reseeding and renormalizing reproduces the coefficients") {
  // xi -> xi + c maps coefficients to c_n e^{n c}; running the recursion
  // with the seed S_{-1} = e^{-c} must land on exactly that family, so
  // multiplying back by (e^{-c})^n recovers the normalized run.
  const auto q = new_params(3, 3.0, 2.1);
  const auto base = compute_coefficients(q, 30);
  const double cshift = 0.3;
  const double seed = std::exp(-cshift);
  const auto shifted = detail::compute_coefficients_seeded(q, 30, seed);
  for (const auto& [n, v] : base.u_coef)
    CHECK(rel_close(shifted.u(n) * std::pow(seed, n), v, 1e-12));
  for (const auto& [n, v] : base.s_coef)
    CHECK(rel_close(shifted.s(n) * std::pow(seed, n), v, 1e-12));
}

TEST_CASE("recursion debug trace is populated") {
  std::vector<RecursionStep> trace;
  compute_coefficients(new_params(3, 3.0, 2.1), 8, &trace);
  CHECK(trace.size() == 9);  // orders -2 .. 6
  CHECK(trace.front().n == -2);
  CHECK(trace.front().lhs_factor > 0.0);
  CHECK(rel_close(trace.front().solved, -11.0 / 15.0, 1e-14));
}
