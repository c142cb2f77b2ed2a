#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcsgap/bounds.hpp"
#include "bcsgap/interpolation.hpp"
#include "bcsgap/model.hpp"

namespace bcsgap {

struct SolverConfig {
  int x_nodes = 33;
  int t_nodes = 33;
  double damping = 1.0;  // Picard mixing factor in (0, 1]
  double fp_tol = 1e-9;  // sup-norm residual target
  int max_iters = 500;
  Interp interpolation = Interp::linear;
};

inline void validate(const SolverConfig& c) {
  if (c.x_nodes < 2 || c.t_nodes < 2)
    throw OutOfRange("solver config: grids need at least 2 nodes");
  if (!(c.damping > 0.0) || c.damping > 1.0)
    throw OutOfRange("solver config: damping must lie in (0, 1]");
  if (!(c.fp_tol > 0.0)) throw OutOfRange("solver config: fp_tol must be positive");
  if (c.max_iters < 1) throw OutOfRange("solver config: max_iters must be positive");
}

struct IterationTrace {
  std::vector<double> residuals;  // sup-norm of Au - u per iteration
  bool converged = false;
  int iterations = 0;
};

struct NoConvergence : NumericalError {
  NoConvergence(const std::string& msg, IterationTrace tr, double t_)
      : NumericalError(msg), trace(std::move(tr)), t(t_) {}
  IterationTrace trace;
  double t;
};

namespace detail {

// Integrand of the gap operator for a profile value u at energy xi:
// u / sqrt(xi^2 + u^2) * tanh(sqrt(xi^2 + u^2) / (2t)). Vanishes with u,
// including at the xi = t = 0 corner where the bare kernel has no limit.
inline double band_integrand(double xi, double u, double t) {
  if (u <= 0.0) return 0.0;
  return u * kernel(xi, u, t);
}

}  // namespace detail

// One application of the gap operator A to a profile sampled on x_grid. The
// profile is evaluated at quadrature nodes through the configured
// interpolation; panels are seeded on the grid nodes and on the potential's
// own lattice lines so every panel sees a smooth integrand.
inline std::vector<double> apply_A(std::span<const double> x_grid, std::span<const double> u,
                                   double t, const Potential& pot, const Params& params,
                                   Interp interp = Interp::linear) {
  if (x_grid.size() != u.size()) throw OutOfRange("apply_A: profile/grid size mismatch");
  if (t < 0.0) throw OutOfRange("apply_A: temperature must be nonnegative");
  const Interpolant ui(x_grid, u, interp);

  std::vector<double> breaks(x_grid.begin(), x_grid.end());
  const auto& pk = pot.xi_breakpoints();
  breaks.insert(breaks.end(), pk.begin(), pk.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> out(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    out[i] = integrate_segmented(
                 [&](double xi) { return pot(x, xi) * detail::band_integrand(xi, ui(xi), t); },
                 breaks, params.quad_tol)
                 .value;
  }
  return out;
}

struct FixedTResult {
  std::vector<double> profile;
  IterationTrace trace;
};

namespace detail {

// Damped Picard iteration clamped to the band [lo, hi] at every step. The
// iteration stops once the sup-norm residual drops under fp_tol; damping is
// halved when the residual rises between consecutive iterations.
inline FixedTResult solve_banded(const Potential& pot, double t, double band_lo, double band_hi,
                                 const SolverConfig& config, const Params& params,
                                 std::span<const double> x_grid,
                                 std::span<const double> initial) {
  std::vector<double> u;
  if (initial.empty()) {
    u.assign(x_grid.size(), 0.5 * (band_lo + band_hi));
  } else {
    if (initial.size() != x_grid.size())
      throw OutOfRange("solve_fixed_T: initial guess size mismatch");
    u.assign(initial.begin(), initial.end());
    for (double& v : u) v = std::clamp(v, band_lo, band_hi);
  }

  IterationTrace trace;
  double damping = config.damping;
  for (int it = 1; it <= config.max_iters; ++it) {
    const auto au = apply_A(x_grid, u, t, pot, params, config.interpolation);
    double r = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) r = std::max(r, std::fabs(au[j] - u[j]));
    trace.residuals.push_back(r);
    trace.iterations = it;
    for (std::size_t j = 0; j < u.size(); ++j)
      u[j] = std::clamp((1.0 - damping) * u[j] + damping * au[j], band_lo, band_hi);
    if (r < config.fp_tol) {
      trace.converged = true;
      return {std::move(u), std::move(trace)};
    }
    if (it >= 2 && r > trace.residuals[static_cast<std::size_t>(it) - 2])
      damping = std::min(damping, 0.5);
  }
  throw NoConvergence("fixed-point iteration did not converge at t=" + std::to_string(t),
                      trace, t);
}

}  // namespace detail

// Solves the gap equation at one temperature on [0, tau2]. The iterate is
// clamped into [Delta1(t), Delta2(t)], which the operator maps into itself,
// and started from the band midpoint unless an initial guess is given.
inline FixedTResult solve_fixed_T(const Potential& pot, double t, const SolverConfig& config,
                                  const Params& params,
                                  std::span<const double> initial = {}) {
  validate(config);
  const SimpleGapProblem p1 = simple_gap_problem(params.u1, params);
  const SimpleGapProblem p2 = simple_gap_problem(params.u2, params);
  const double tau1 = critical_temperature(p1);
  const double tau2 = critical_temperature(p2);
  if (t < 0.0 || t > tau2) throw OutOfRange("solve_fixed_T: t outside [0, tau2]");
  const double lo = detail::delta_at_known_tau(p1, t, tau1);
  const double hi = detail::delta_at_known_tau(p2, t, tau2);
  const auto x_grid = linspace(0.0, params.hbar_omega_d, config.x_nodes);
  return detail::solve_banded(pot, t, lo, hi, config, params, x_grid, initial);
}

struct SurfaceResult {
  GapSurface surface;
  std::vector<IterationTrace> traces;
};

// Per-temperature solves chained over an increasing grid, warm-starting each
// temperature from the previous profile (the solution decreases in T, so the
// previous profile clamped into the new band is already close). No
// feasibility gate: valid anywhere on [0, tau2].
inline SurfaceResult solve_on_grid(const Potential& pot, std::span<const double> t_grid,
                                   const SolverConfig& config, const Params& params) {
  validate(config);
  if (t_grid.empty()) throw OutOfRange("solve_on_grid: empty temperature grid");
  if (t_grid.front() < 0.0) throw OutOfRange("solve_on_grid: temperatures must be nonnegative");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1]))
      throw OutOfRange("solve_on_grid: temperature grid must be increasing");

  const SimpleGapProblem p1 = simple_gap_problem(params.u1, params);
  const SimpleGapProblem p2 = simple_gap_problem(params.u2, params);
  const double tau1 = critical_temperature(p1);
  const double tau2 = critical_temperature(p2);
  if (t_grid.back() > tau2) throw OutOfRange("solve_on_grid: grid exceeds tau2");

  SurfaceResult res;
  res.surface.t_grid.assign(t_grid.begin(), t_grid.end());
  res.surface.x_grid = linspace(0.0, params.hbar_omega_d, config.x_nodes);
  std::vector<double> warm;
  for (double t : t_grid) {
    const double lo = detail::delta_at_known_tau(p1, t, tau1);
    const double hi = detail::delta_at_known_tau(p2, t, tau2);
    auto one = detail::solve_banded(pot, t, lo, hi, config, params, res.surface.x_grid, warm);
    warm = one.profile;
    res.surface.values.push_back(std::move(one.profile));
    res.traces.push_back(std::move(one.trace));
  }

  // Monotone decrease in T, up to iteration noise. The sandwich holds by
  // construction of the clamped iteration.
  for (std::size_t i = 0; i + 1 < res.surface.values.size(); ++i)
    for (std::size_t j = 0; j < res.surface.x_grid.size(); ++j)
      if (res.surface.values[i + 1][j] - res.surface.values[i][j] > 10.0 * config.fp_tol)
        throw NumericalError("solve_on_grid: surface not monotone in T at t=" +
                             std::to_string(t_grid[i + 1]));
  return res;
}

// Full-rectangle solve on [0, tau] x [0, hbar_omega_d], restricted to the
// regime where the Lipschitz machinery applies: tau < tau0 and 1 > U2 a.
inline SurfaceResult solve_surface(const Potential& pot, double tau, const SolverConfig& config,
                                   const Params& params) {
  validate(config);
  const BoundConstants bc = bound_constants(params, tau);
  if (!bc.feasible)
    throw InfeasibleCoupling("solve_surface: coupling u2 = " + std::to_string(params.u2) +
                                 " violates 1 > u2*a (a = " + std::to_string(bc.a) + ")",
                             params.u2, bc.a);
  const auto t_grid = linspace(0.0, tau, config.t_nodes);
  return solve_on_grid(pot, t_grid, config, params);
}

}  // namespace bcsgap
