#pragma once

#include <cmath>
#include <limits>

#include "bcsgap/errors.hpp"

namespace bcsgap {

struct RootControls {
  int max_iters = 200;
  // Force plain bisection while the bracket's upper endpoint is below this
  // value. Used where the residual goes flat near the root and secant steps
  // stop being informative.
  double bisect_when_hi_below = -std::numeric_limits<double>::infinity();
};

// Bracketed hybrid secant/bisection search for a sign change of f on [lo, hi].
// Secant steps are clamped to the interior of the bracket and a stagnation
// counter falls back to bisection, so convergence is never worse than
// bisection. The bracket is driven down to floating-point width; accuracy is
// limited by the conditioning of f, not by an absolute tolerance.
template <class F>
double find_root(F&& f, double lo, double hi, RootControls ctl = {}) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  double f_hi = f(hi);
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0))
    throw BracketFailure("find_root: no sign change over the bracket");

  int last_side = 0;
  int stuck = 0;
  for (int it = 0; it < ctl.max_iters; ++it) {
    const double width = hi - lo;
    double x = std::numeric_limits<double>::quiet_NaN();
    if (hi >= ctl.bisect_when_hi_below && stuck < 3) {
      x = hi - f_hi * width / (f_hi - f_lo);
      const double margin = 0.01 * width;
      if (!std::isfinite(x) || x < lo + margin || x > hi - margin)
        x = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(x)) {
      x = lo + 0.5 * width;
      stuck = 0;
    }
    if (!(x > lo && x < hi)) break;  // bracket at floating-point resolution
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
      stuck = (last_side == -1) ? stuck + 1 : 1;
      last_side = -1;
    } else {
      hi = x;
      f_hi = fx;
      stuck = (last_side == +1) ? stuck + 1 : 1;
      last_side = +1;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace bcsgap
