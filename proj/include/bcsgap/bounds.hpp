#pragma once

#include <cmath>
#include <limits>

#include "bcsgap/simple_gap.hpp"

namespace bcsgap {

// Structural constants behind the temperature-Lipschitz bound:
//   z0   solves 2/z = tanh z,
//   tau0 solves Delta1(tau0) = 2 z0 tau0  (0 < tau0 < tau1),
//   a    = max over T in [0, tau] of F(T), F(T) = integral of
//          kernel(xi, Delta1(T), tau0),
//   b    = 32 tau^2 / Delta1(tau)^2 * arctan(hbar_omega_d / Delta1(tau)),
//   gamma = U2 b / (1 - U2 a), defined only when 1 > U2 a.
struct BoundConstants {
  double z0 = 0.0;
  double tau0 = 0.0;
  double tau = 0.0;
  double a = 0.0;
  double b = 0.0;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
};

inline double solve_z0(double root_tol = 1e-12) {
  const auto f = [](double z) { return std::tanh(z) - 2.0 / z; };
  // f(1) < 0 < f(3), so [1, 3] always brackets the unique positive root.
  const double z0 = find_root(f, 1.0, 3.0);
  if (std::fabs(f(z0)) > root_tol)
    throw NumericalError("solve_z0: residual above tolerance");
  return z0;
}

inline double solve_tau0(const Params& params) {
  const SimpleGapProblem p1 = simple_gap_problem(params.u1, params);
  const double tau1 = critical_temperature(p1);
  const double z0 = solve_z0(params.root_tol);
  // g(0) = Delta1(0) > 0, g(tau1) = -2 z0 tau1 < 0, and g decreases strictly
  // (falling gap, rising linear term), so the root is unique.
  const auto g = [&](double t) {
    return detail::delta_at_known_tau(p1, t, tau1) - 2.0 * z0 * t;
  };
  return find_root(g, 0.0, tau1);
}

namespace detail {

inline BoundConstants bound_constants_impl(const Params& params, double tau, int scan_nodes) {
  if (!(tau > 0.0)) throw NonPositiveInput("bound constants: tau must be positive");
  if (scan_nodes < 2) throw OutOfRange("bound constants: scan needs at least 2 nodes");
  BoundConstants bc;
  bc.z0 = solve_z0(params.root_tol);
  bc.tau0 = solve_tau0(params);
  bc.tau = tau;
  if (!(tau < bc.tau0)) throw OutOfRange("bound constants: tau must lie strictly below tau0");

  const SimpleGapProblem p1 = simple_gap_problem(params.u1, params);
  const double tau1 = critical_temperature(p1);

  // a: Delta1 decreases and the kernel decreases in delta, so F increases in
  // T and the max sits at T = tau. The scan is kept as a configuration guard.
  const auto t_scan = linspace(0.0, tau, scan_nodes);
  double a = -std::numeric_limits<double>::infinity();
  double f_last = 0.0;
  for (double t : t_scan) {
    const double d1 = delta_at_known_tau(p1, t, tau1);
    f_last = gap_integral(d1, bc.tau0, params);
    if (f_last > a) a = f_last;
  }
  if (f_last < a - 1e-9 * std::fabs(a))
    throw NumericalError("bound constants: scan max of F did not occur at tau");
  bc.a = a;

  const double d1_tau = delta_at_known_tau(p1, tau, tau1);
  bc.b = 32.0 * tau * tau / (d1_tau * d1_tau) * std::atan(params.hbar_omega_d / d1_tau);

  bc.feasible = params.u2 * bc.a < 1.0;
  if (bc.feasible) bc.gamma = params.u2 * bc.b / (1.0 - params.u2 * bc.a);
  return bc;
}

}  // namespace detail

inline BoundConstants bound_constants(const Params& params, double tau, int scan_nodes = 64) {
  return detail::bound_constants_impl(params, tau, scan_nodes);
}

inline double compute_a(const Params& params, double tau, int scan_nodes = 64) {
  return detail::bound_constants_impl(params, tau, scan_nodes).a;
}

inline double compute_b(const Params& params, double tau) {
  return detail::bound_constants_impl(params, tau, 2).b;
}

// Assembles the constants and refuses infeasible upper couplings: gamma only
// exists when U2 is chosen with 1 > U2 a.
inline BoundConstants compute_gamma(const Params& params, double tau, int scan_nodes = 64) {
  BoundConstants bc = detail::bound_constants_impl(params, tau, scan_nodes);
  if (!bc.feasible)
    throw InfeasibleCoupling("coupling u2 = " + std::to_string(params.u2) +
                                 " violates 1 > u2*a (a = " + std::to_string(bc.a) + ")",
                             params.u2, bc.a);
  return bc;
}

// Report for the small-temperature condition on T1: T1 must lie below the
// temperature where the lowest curve halves, and the displayed coupling
// inequality must hold. Both sides are echoed so the (usually failing, for
// weak coupling) comparison is observable.
struct T1Report {
  double t1 = 0.0;
  double u0 = 0.0;
  double t1_limit = 0.0;  // temperature where Delta0 reaches Delta0(0)/2
  bool within_limit = false;
  double lhs = 0.0;
  double rhs = 0.0;
  bool inequality_holds = false;
  bool pass = false;
};

inline T1Report check_t1_inequality(const Params& params, double t1, double u0 = 0.0) {
  if (u0 <= 0.0) u0 = 0.9 * params.u1;
  if (!(u0 < params.u1)) throw OutOfRange("t1 check: need u0 < u1");
  if (!(t1 > 0.0)) throw NonPositiveInput("t1 check: t1 must be positive");
  const SimpleGapProblem p0 = simple_gap_problem(u0, params);
  const SimpleGapProblem p2 = simple_gap_problem(params.u2, params);

  T1Report r;
  r.t1 = t1;
  r.u0 = u0;
  const double d00 = gap_at_zero(p0);
  r.t1_limit = delta_inverse(p0, 0.5 * d00);
  r.within_limit = t1 < r.t1_limit;

  const double d0_t1 = delta_at(p0, t1);
  const double t_star = delta_inverse(p2, d0_t1);  // in range: d0_t1 < Delta2(0)
  if (!(t_star > 0.0))
    throw OutOfRange("t1 check: upper curve inverse degenerate");
  const double arg = d00 / (4.0 * t_star);
  r.lhs = arg * std::tanh(arg);
  const double ratio = params.hbar_omega_d / d00;
  r.rhs = 0.5 * (1.0 + 4.0 * ratio * ratio);
  r.inequality_holds = r.lhs > r.rhs;
  r.pass = r.within_limit && r.inequality_holds;
  return r;
}

}  // namespace bcsgap
