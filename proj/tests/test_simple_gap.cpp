#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bcsgap/simple_gap.hpp"
#include "test_support.hpp"

using namespace bcsgap;

namespace {
const Params params = testsup::default_params();
const SimpleGapProblem p1 = simple_gap_problem(params.u1, params);
const SimpleGapProblem p2 = simple_gap_problem(params.u2, params);
}  // namespace

TEST_CASE("critical temperature satisfies its defining equation") {
  const double tau = critical_temperature(p1);
  const double residual =
      1.0 - params.u1 * integrate([&](double xi) { return kernel(xi, 0.0, tau); }, 0.0,
                                  params.hbar_omega_d, params.quad_tol)
                .value;
  CHECK(std::fabs(residual) < 1e-9);
}

TEST_CASE("critical temperatures are ordered by coupling") {
  CHECK(critical_temperature(p1) < critical_temperature(p2));
}

TEST_CASE("critical temperature vs bisection oracle") {
  const double tau = critical_temperature(p1);
  const double oracle = testsup::oracle_tau(params.u1, params.hbar_omega_d, 1000000);
  CHECK(std::fabs(tau - oracle) < 1e-6);
}

TEST_CASE("zero-temperature gap closed form") {
  const auto punit = simple_gap_problem(1.0 / std::asinh(1.0), params);
  CHECK(gap_at_zero(punit) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(gap_at_zero(p1) == Catch::Approx(1.0 / std::sinh(10.0 / 3.0)).epsilon(1e-15));

  // cross-check: at t = 0 the defining integral is arcsinh(hw/delta)
  const double oracle = testsup::bisect_oracle(
      [&](double d) { return 1.0 - params.u1 * std::asinh(params.hbar_omega_d / d); }, 1e-6,
      1.0, 60);
  CHECK(gap_at_zero(p1) == Catch::Approx(oracle).margin(1e-12));

  // monotone in the coupling
  const auto p0 = simple_gap_problem(0.27, params);
  CHECK(gap_at_zero(p0) < gap_at_zero(p1));
  CHECK(gap_at_zero(p1) < gap_at_zero(p2));
}

TEST_CASE("gap curve endpoints and decrease") {
  const double tau = critical_temperature(p1);
  CHECK(delta_at(p1, 0.0) == Catch::Approx(gap_at_zero(p1)).margin(1e-10));
  CHECK(delta_at(p1, tau) == 0.0);
  CHECK(delta_at(p1, 1.01 * tau) == 0.0);
  // strict decrease at well-separated temperatures
  const double a = delta_at(p1, 0.2 * tau);
  const double b = delta_at(p1, 0.5 * tau);
  const double c = delta_at(p1, 0.8 * tau);
  CHECK(a > b);
  CHECK(b > c);
  CHECK(c > 0.0);
}

TEST_CASE("gap values satisfy the defining residual") {
  const double tau = critical_temperature(p1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 0.95 * tau);
  for (int k = 0; k < 10; ++k) {
    const double t = ut(rng);
    const double d = delta_at(p1, t);
    const double residual =
        1.0 - params.u1 * integrate([&](double xi) { return kernel(xi, d, t); }, 0.0,
                                    params.hbar_omega_d, params.quad_tol)
                  .value;
    CHECK(std::fabs(residual) < params.root_tol);
  }
}

TEST_CASE("gap value vs brute-force oracle") {
  const double d = delta_at(p1, 0.02);
  const double oracle = testsup::oracle_delta(params.u1, 0.02, params.hbar_omega_d, 200000);
  CHECK(std::fabs(d - oracle) < 1e-6);
}

TEST_CASE("lower curve sits under the upper curve") {
  const double tau2 = critical_temperature(p2);
  for (int k = 0; k < 50; ++k) {
    const double t = tau2 * double(k) / 50.0;
    CHECK(delta_at(p1, t) < delta_at(p2, t));
  }
  CHECK(delta_at(p1, tau2) == 0.0);
  CHECK(delta_at(p2, tau2) == 0.0);
  CHECK(delta_at(p1, 1.1 * tau2) == 0.0);
  CHECK(delta_at(p2, 1.1 * tau2) == 0.0);
}

TEST_CASE("sampled curve") {
  const double tau = critical_temperature(p1);

  const double single[1] = {0.0};
  const auto c0 = delta_curve(p1, single);
  CHECK(c0.values.size() == 1);
  CHECK(c0.values[0] == Catch::Approx(gap_at_zero(p1)).margin(params.root_tol));

  const auto grid = linspace(0.0, tau, 9);
  const auto c = delta_curve(p1, grid);
  CHECK(c.tau == Catch::Approx(tau).margin(1e-14));
  CHECK(c.values.back() == 0.0);
  for (std::size_t i = 0; i + 1 < c.values.size(); ++i) {
    if (c.values[i] > 0.0 && c.values[i + 1] > 0.0) CHECK(c.values[i] > c.values[i + 1]);
    CHECK(c.values[i + 1] <= c.values[i] + 1e-12);
  }

  CHECK_THROWS_AS(delta_curve(p1, std::vector<double>{0.3, 0.2}), OutOfRange);
}

TEST_CASE("curve inversion") {
  const double tau = critical_temperature(p1);
  const auto c = delta_curve(p1, linspace(0.0, tau, 9));

  CHECK(delta_inverse(c, c.values.front(), params) == 0.0);
  CHECK(delta_inverse(c, 0.0, params) == c.tau);
  CHECK_THROWS_AS(delta_inverse(c, 2.0 * c.values.front(), params), OutOfRange);
  CHECK_THROWS_AS(delta_inverse(c, -0.1, params), OutOfRange);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uv(0.0, c.values.front());
  for (int k = 0; k < 20; ++k) {
    const double v = uv(rng);
    const double t = delta_inverse(c, v, params);
    CHECK(std::fabs(delta_at(p1, t) - v) < 2.0 * params.root_tol);
  }
}

TEST_CASE("finite-difference slope trends") {
  const double tau = critical_temperature(p1);

  // flat start: the slope magnitude shrinks (to zero) with the step
  const double s2 = std::fabs(derivative_probe(p1, 0.0, 1e-2 * tau));
  const double s3 = std::fabs(derivative_probe(p1, 0.0, 1e-3 * tau));
  CHECK(s2 < 0.05);
  CHECK(s3 <= s2 + 1e-12);

  // steep finish: the slope magnitude grows as the probe closes on tau
  const double e2 = 1e-2 * tau, e3 = 1e-3 * tau;
  const double n2 = std::fabs(derivative_probe(p1, tau - e2, e2 / 2.0));
  const double n3 = std::fabs(derivative_probe(p1, tau - e3, e3 / 2.0));
  CHECK(n3 >= 2.0 * n2);

  CHECK(derivative_probe(p1, tau / 2.0, 1e-4 * tau) < 0.0);

  CHECK_THROWS_AS(derivative_probe(p1, tau, 1e-3 * tau), OutOfRange);
  CHECK_THROWS_AS(derivative_probe(p1, 0.0, 0.0), NonPositiveInput);
}

TEST_CASE("problem construction") {
  CHECK_THROWS_AS(simple_gap_problem(0.0, params), NonPositiveInput);
  CHECK_THROWS_AS(simple_gap_problem(-0.3, params), NonPositiveInput);
}
