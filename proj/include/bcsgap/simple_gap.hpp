#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "bcsgap/model.hpp"
#include "bcsgap/quadrature.hpp"
#include "bcsgap/roots.hpp"

namespace bcsgap {

// Constant-coupling reduction of the gap equation: the unknown is a single
// number Delta(T) solving 1 = U * integral of kernel(xi, Delta, T) over
// [0, hbar_omega_d].
struct SimpleGapProblem {
  double coupling = 0.0;
  Params params;
};

inline SimpleGapProblem simple_gap_problem(double coupling, const Params& params) {
  if (!(coupling > 0.0)) throw NonPositiveInput("simple gap: coupling must be positive");
  return SimpleGapProblem{coupling, params};
}

namespace detail {

inline double gap_integral(double delta, double t, const Params& p) {
  return integrate([&](double xi) { return kernel(xi, delta, t); }, 0.0, p.hbar_omega_d,
                   p.quad_tol)
      .value;
}

}  // namespace detail

// Closed form of the zero-temperature gap: at T = 0 the defining integral is
// arcsinh(hbar_omega_d / Delta), so Delta(0) = hbar_omega_d / sinh(1/U).
inline double gap_at_zero(const SimpleGapProblem& p) {
  return p.params.hbar_omega_d / std::sinh(1.0 / p.coupling);
}

// The temperature where the gap closes: 1 = U * integral of tanh(xi/2T)/xi.
// The integral decreases in T and diverges as T -> 0, so the residual is
// strictly monotone and a geometric expansion always brackets the root.
inline double critical_temperature(const SimpleGapProblem& p) {
  const auto residual = [&](double t) {
    return 1.0 - p.coupling * detail::gap_integral(0.0, t, p.params);
  };
  double hi = p.params.hbar_omega_d;
  double f_hi = residual(hi);
  for (int i = 0; f_hi < 0.0; ++i) {
    if (i > 60) throw BracketFailure("critical_temperature: no upper bracket");
    hi *= 2.0;
    f_hi = residual(hi);
  }
  double lo = 0.5 * hi;
  double f_lo = residual(lo);
  while (f_lo > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-14 * p.params.hbar_omega_d)
      throw BracketFailure("critical_temperature: no lower bracket");
    f_lo = residual(lo);
  }
  return find_root(residual, lo, hi);
}

namespace detail {

inline double delta_at_known_tau(const SimpleGapProblem& p, double t, double tau) {
  if (t < 0.0) throw OutOfRange("delta_at: temperature must be nonnegative");
  if (t >= tau) return 0.0;  // extension by zero above the critical temperature
  const double d0 = gap_at_zero(p);
  const auto residual = [&](double d) {
    return 1.0 - p.coupling * gap_integral(d, t, p.params);
  };
  // The residual increases strictly in Delta. The fixed bracket below holds
  // for every t except close to tau, where the root drops under lo and the
  // bracket is shifted to [0, lo]; the residual is flat there, so the solve
  // switches to bisection once the bracket top is small.
  double lo = 1e-6 * d0;
  double hi = d0 * (1.0 + 1e-6);
  double f_lo = residual(lo);
  if (f_lo >= 0.0) {
    hi = lo;
    lo = 0.0;
    if (t == 0.0 || residual(lo) >= 0.0) return 0.0;  // numerically at/over tau
  }
  RootControls ctl;
  ctl.bisect_when_hi_below = 1e-3 * d0;
  return find_root(residual, lo, hi, ctl);
}

}  // namespace detail

// The gap at temperature t; zero for t at or above the critical temperature.
inline double delta_at(const SimpleGapProblem& p, double t) {
  if (t == 0.0)
    return detail::delta_at_known_tau(p, 0.0, std::numeric_limits<double>::infinity());
  return detail::delta_at_known_tau(p, t, critical_temperature(p));
}

inline GapCurve delta_curve(const SimpleGapProblem& p, std::span<const double> t_grid) {
  if (t_grid.empty()) throw OutOfRange("delta_curve: empty grid");
  if (t_grid.front() < 0.0) throw OutOfRange("delta_curve: temperatures must be nonnegative");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1])) throw OutOfRange("delta_curve: grid must be increasing");
  GapCurve c;
  c.coupling = p.coupling;
  c.tau = critical_temperature(p);
  c.t_grid.assign(t_grid.begin(), t_grid.end());
  c.values.reserve(t_grid.size());
  for (double t : t_grid) c.values.push_back(detail::delta_at_known_tau(p, t, c.tau));
  return c;
}

// Inverse of the gap curve: the temperature where the gap equals value.
inline double delta_inverse(const SimpleGapProblem& p, double value) {
  const double tau = critical_temperature(p);
  const double top = detail::delta_at_known_tau(p, 0.0, tau);
  if (value < 0.0 || value > top)
    throw OutOfRange("delta_inverse: value outside the curve's range");
  if (value == 0.0) return tau;
  if (value == top) return 0.0;
  const auto g = [&](double t) { return detail::delta_at_known_tau(p, t, tau) - value; };
  return find_root(g, 0.0, tau);
}

inline double delta_inverse(const GapCurve& c, double value, const Params& params) {
  if (c.t_grid.empty()) throw OutOfRange("delta_inverse: empty curve");
  if (value < 0.0 || value > c.values.front())
    throw OutOfRange("delta_inverse: value outside the curve's range");
  const SimpleGapProblem p = simple_gap_problem(c.coupling, params);
  if (value == 0.0) return c.tau;
  if (value == c.values.front()) return c.t_grid.front();
  const auto g = [&](double t) { return detail::delta_at_known_tau(p, t, c.tau) - value; };
  return find_root(g, c.t_grid.front(), c.tau);
}

// Finite-difference slope of the gap curve, centered where the stencil fits
// and one-sided at t = 0. A trend probe, not a derivative computation.
inline double derivative_probe(const SimpleGapProblem& p, double t, double h) {
  if (!(h > 0.0)) throw NonPositiveInput("derivative_probe: h must be positive");
  const double tau = critical_temperature(p);
  if (t < 0.0 || t + h >= tau) throw OutOfRange("derivative_probe: stencil leaves [0, tau)");
  const double fwd = detail::delta_at_known_tau(p, t + h, tau);
  if (t - h >= 0.0)
    return (fwd - detail::delta_at_known_tau(p, t - h, tau)) / (2.0 * h);
  return (fwd - detail::delta_at_known_tau(p, t, tau)) / h;
}

}  // namespace bcsgap
