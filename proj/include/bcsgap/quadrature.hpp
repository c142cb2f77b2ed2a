#pragma once

#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "bcsgap/errors.hpp"

namespace bcsgap {

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions = 0;
};

// tanh(sqrt(xi^2 + delta^2) / (2t)) / sqrt(xi^2 + delta^2), with the t = 0
// and E -> 0 limits taken analytically instead of evaluated as 0/0.
inline double kernel(double xi, double delta, double t) {
  if (t < 0.0) throw OutOfRange("kernel: temperature must be nonnegative");
  const double e = std::hypot(xi, delta);
  if (t == 0.0) {
    if (e == 0.0) throw UndefinedLimit("kernel: limit undefined at xi = delta = t = 0");
    return 1.0 / e;  // tanh saturates to 1
  }
  const double z = e / (2.0 * t);
  if (z < 1e-8) return 1.0 / (2.0 * t);  // tanh(z)/z -> 1
  return std::tanh(z) / e;
}

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1]: {abscissa, Gauss weight, Kronrod weight}.
// Row 0 is the center node; the rest are symmetric pairs.
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.000000000000000, 0.204432940075298},
    {0.586087235467691, 0.000000000000000, 0.169004726639267},
    {0.864864423359769, 0.000000000000000, 0.104790010322250},
    {0.991455371120813, 0.000000000000000, 0.022935322010529},
};

struct Panel {
  double lo, hi;
  double value;
  double err;
};

inline bool operator<(const Panel& a, const Panel& b) { return a.err < b.err; }

template <class F>
Panel gk15(F&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f0 = f(mid);
  double g7 = kGK15[0][1] * f0;
  double k15 = kGK15[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i][0];
    const double fi = f(mid + dx) + f(mid - dx);
    g7 += kGK15[i][1] * fi;
    k15 += kGK15[i][2] * fi;
  }
  g7 *= half;
  k15 *= half;
  double err = std::fabs(k15 - g7);
  const double scaled = std::pow(200.0 * err, 1.5);
  if (scaled < err) err = scaled;
  return {lo, hi, k15, err};
}

}  // namespace detail

// Globally adaptive quadrature seeded with caller-supplied panels (so known
// kinks can be placed on panel boundaries). The worst panel is bisected until
// the summed error estimate meets tol.
template <class F>
QuadResult integrate_segmented(F&& f, std::span<const double> breakpoints, double tol,
                               int max_subdivisions = 2000) {
  if (breakpoints.size() < 2) throw OutOfRange("integrate: need at least two breakpoints");
  if (!(tol > 0.0)) throw OutOfRange("integrate: tolerance must be positive");

  std::priority_queue<detail::Panel> panels;
  double total_err = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] > breakpoints[i + 1])
      throw OutOfRange("integrate: breakpoints must be nondecreasing");
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    const auto p = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
    total_err += p.err;
    panels.push(p);
    ++count;
  }

  while (total_err > tol && !panels.empty()) {
    if (count >= max_subdivisions)
      throw MaxSubdivisions("integrate: tolerance not reached after " + std::to_string(count) +
                            " panels (err=" + std::to_string(total_err) + ")");
    const detail::Panel worst = panels.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi))
      throw MaxSubdivisions("integrate: panel at floating-point resolution, err=" +
                            std::to_string(total_err));
    panels.pop();
    const auto l = detail::gk15(f, worst.lo, mid);
    const auto r = detail::gk15(f, mid, worst.hi);
    total_err += l.err + r.err - worst.err;
    panels.push(l);
    panels.push(r);
    ++count;
  }

  QuadResult res;
  res.subdivisions = count;
  res.err_estimate = total_err;
  while (!panels.empty()) {
    res.value += panels.top().value;
    panels.pop();
  }
  return res;
}

template <class F>
QuadResult integrate(F&& f, double lo, double hi, double tol, int max_subdivisions = 2000) {
  if (lo > hi) throw OutOfRange("integrate: lo must not exceed hi");
  const double pts[2] = {lo, hi};
  return integrate_segmented(f, pts, tol, max_subdivisions);
}

}  // namespace bcsgap
