#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nlsprof/params.hpp"

using namespace nlsprof;
using testutil::rel_close;

TEST_CASE("derived constants") {
  const auto q = new_params(3, 10.0 / 3.0, 2.1);
  CHECK(q.alpha == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
  CHECK(q.gamma == doctest::Approx(13.0 / 6.0).epsilon(1e-15));
  CHECK(q.s_c == doctest::Approx(9.0 / 14.0).epsilon(1e-15));

  // mass-critical boundary: p = 1 + 4/d
  const auto q2 = new_params(1, 5.0, 2.5);
  CHECK(q2.s_c == doctest::Approx(0.0));

  const auto q3 = new_params(3, 3.0, 2.1);
  CHECK(q3.alpha == 0.5);
  CHECK(q3.alpha * q3.d > q3.r - 1.0);
  CHECK(q3.s_c == 0.5);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(new_params(0, 3.0, 2.1), std::invalid_argument);
  CHECK_THROWS_AS(new_params(3, 1.0, 2.1), std::invalid_argument);
  CHECK_THROWS_AS(new_params(3, 0.5, 2.1), std::invalid_argument);
  CHECK_THROWS_AS(new_params(3, 3.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(new_params(3, 3.0, -1.0), std::invalid_argument);
}

TEST_CASE("regime classification") {
  const auto v = classify(new_params(3, 10.0 / 3.0, 2.1));
  CHECK(v.supercritical_mass);
  CHECK(v.r_window);
  CHECK(v.barrier_condition == BarrierCondition::Strict);
  CHECK_FALSE(v.odd_integer_p);

  // alpha d = 3/2 = r - 1 exactly
  CHECK(classify(new_params(3, 3.0, 2.5)).barrier_condition == BarrierCondition::Degenerate);
  // alpha d = 1/2 < 2
  CHECK(classify(new_params(1, 3.0, 3.0)).barrier_condition == BarrierCondition::Violated);

  CHECK(classify(new_params(3, 3.0, 2.1)).odd_integer_p);
  CHECK(classify(new_params(3, 5.0, 2.1)).odd_integer_p);
  CHECK_FALSE(classify(new_params(3, 4.0, 2.1)).odd_integer_p);
}

TEST_CASE("admissible r interval nonempty exactly in the supercritical range") {
  auto gen = testutil::rng(1);
  std::uniform_real_distribution<double> pd(1.01, 12.0);
  std::uniform_int_distribution<int> dd(1, 6);
  for (int it = 0; it < 2000; ++it) {
    const int d = dd(gen);
    const double p = pd(gen);
    const auto iv = admissible_r_interval(d, p);
    const bool supercritical = p > 1.0 + 4.0 / d;
    CHECK(iv.empty() == !supercritical);
    if (!iv.empty()) {
      const auto v = classify(new_params(d, p, iv.midpoint()));
      CHECK(v.supercritical_mass);
      CHECK(v.r_window);
      CHECK(v.barrier_condition == BarrierCondition::Strict);
    }
  }
}

TEST_CASE("derived fields recompute exactly") {
  auto gen = testutil::rng(2);
  std::uniform_real_distribution<double> pd(1.001, 15.0);
  std::uniform_real_distribution<double> rd(0.1, 6.0);
  std::uniform_int_distribution<int> dd(1, 8);
  for (int it = 0; it < 1000; ++it) {
    const int d = dd(gen);
    const double p = pd(gen), r = rd(gen);
    const auto q = new_params(d, p, r);
    CHECK(q.alpha == (p - 1.0) / 4.0);
    CHECK(q.gamma == (p + 1.0) / 2.0);
    CHECK(rel_close(q.s_c, 0.5 * d - 2.0 / (p - 1.0), 4e-16));
  }
}
