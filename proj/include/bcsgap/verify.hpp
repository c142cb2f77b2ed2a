#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bcsgap/solver.hpp"

namespace bcsgap {

using Grid2D = std::vector<std::vector<double>>;

struct CheckResult {
  std::string name;
  std::string claim;  // the inequality or identity being checked
  bool pass = false;
  bool skipped = false;  // gated off (no gamma available)
  double margin = 0.0;   // tolerance-adjusted slack; >= 0 passes
  std::string worst;     // location of the worst case
};

struct VerifyOptions {
  int curve_points = 50;
  int g_samples = 1000;
  int w_draws = 100;  // random admissible functions for the operator checks
  std::uint64_t seed = 20250801;
  double band_tol = 1e-7;
  double monotone_tol = 1e-7;
  double lipschitz_tol = 1e-6;
  double g_tol = 1e-10;
  double continuity_tol = 1e-7;
  double image_lower_tol = 1e-9;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  Params params;
  SolverConfig config;
  double tau = 0.0;
  std::string potential_desc;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.skipped && !c.pass) return false;
    return true;
  }
};

// G(T, X, xi) = xi^2 tanh(sqrt(xi^2 + X) / (2T)) + 4 X T / sqrt(xi^2 + X),
// nondecreasing in T on [0, tau0] for X >= Delta1(tau0)^2.
inline double G_function(double t, double X, double xi) {
  if (X < 0.0 || t < 0.0) throw OutOfRange("G: needs X >= 0 and T >= 0");
  const double e = std::sqrt(xi * xi + X);
  if (t == 0.0) return xi * xi;  // tanh -> 1 and the linear term vanishes
  return xi * xi * std::tanh(e / (2.0 * t)) + 4.0 * X * t / e;
}

namespace detail {

inline std::string at_location(double t, double x) {
  std::ostringstream o;
  o << "T=" << t << ", x=" << x;
  return o.str();
}

}  // namespace detail

inline CheckResult check_G_monotone(const Params& params, int sample_count, std::uint64_t seed) {
  CheckResult c;
  c.name = "G-monotone";
  c.claim = "G(T,X,xi) nondecreasing in T on [0, tau0] for X >= Delta1(tau0)^2";
  const double tau0 = solve_tau0(params);
  const double d1_tau0 = 2.0 * solve_z0(params.root_tol) * tau0;  // defining identity
  const double hw = params.hbar_omega_d;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(d1_tau0 * d1_tau0, 4.0 * hw * hw);
  std::uniform_real_distribution<double> uxi(0.0, hw);
  std::uniform_real_distribution<double> ut(0.0, tau0);

  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sample_count; ++k) {
    const double X = ux(rng);
    const double xi = uxi(rng);
    double ta = (k == 0) ? 0.0 : ut(rng);  // always exercise the T = 0 limit once
    double tb = (k == 0) ? tau0 : ut(rng);
    if (ta > tb) std::swap(ta, tb);
    if (ta == tb) continue;
    const double gain = G_function(tb, X, xi) - G_function(ta, X, xi);
    if (gain < worst) {
      worst = gain;
      std::ostringstream o;
      o << "X=" << X << ", xi=" << xi << ", T=" << ta << ", T'=" << tb;
      c.worst = o.str();
    }
  }
  c.margin = worst + 1e-10;
  c.pass = c.margin >= 0.0;
  return c;
}

// Membership test for the admissible set: values inside the band at every
// node, and every ordered temperature pair monotone and gamma-Lipschitz.
inline bool is_W_member(std::span<const double> t_grid, std::span<const double> x_grid,
                        const Grid2D& u, std::span<const double> d1, std::span<const double> d2,
                        double gamma, double tol, std::string* worst = nullptr,
                        double* margin_out = nullptr) {
  const std::size_t nt = t_grid.size();
  const std::size_t nx = x_grid.size();
  if (u.size() != nt || d1.size() != nt || d2.size() != nt)
    throw OutOfRange("is_W_member: row count mismatch");
  double margin = std::numeric_limits<double>::infinity();
  std::string where;
  const auto note = [&](double m, double t, double x) {
    if (m < margin) {
      margin = m;
      where = detail::at_location(t, x);
    }
  };
  for (std::size_t i = 0; i < nt; ++i) {
    if (u[i].size() != nx) throw OutOfRange("is_W_member: column count mismatch");
    for (std::size_t j = 0; j < nx; ++j) {
      note(u[i][j] - (d1[i] - tol), t_grid[i], x_grid[j]);
      note((d2[i] + tol) - u[i][j], t_grid[i], x_grid[j]);
    }
  }
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t k = i + 1; k < nt; ++k) {
      const double dt = t_grid[k] - t_grid[i];
      for (std::size_t j = 0; j < nx; ++j) {
        const double drop = u[i][j] - u[k][j];
        note(drop + tol, t_grid[k], x_grid[j]);
        note(gamma * dt + tol - drop, t_grid[k], x_grid[j]);
      }
    }
  }
  if (worst) *worst = where;
  if (margin_out) *margin_out = margin;
  return margin >= 0.0;
}

// Draws a random admissible function: a smooth convex blend between the two
// band curves, u(T, x) = Delta1(T) + theta(x) (Delta2(T) - Delta1(T)), then
// slope-limited in T against gamma and re-clamped to the band.
inline Grid2D random_W_element(std::uint64_t seed, std::span<const double> t_grid,
                               std::span<const double> x_grid, std::span<const double> d1,
                               std::span<const double> d2, double gamma) {
  const std::size_t nt = t_grid.size();
  const std::size_t nx = x_grid.size();
  if (nt < 2 || nx < 1) throw OutOfRange("random_W_element: need at least 2 temperatures");
  if (d1.size() != nt || d2.size() != nt) throw OutOfRange("random_W_element: curve size mismatch");
  double band = 0.0;
  for (std::size_t i = 0; i < nt; ++i) band = std::max(band, d2[i] - d1[i]);
  if (!(band > 0.0))
    throw DegenerateBand("random_W_element: Delta1 = Delta2 leaves no band to sample");
  if (!(gamma > 0.0)) throw OutOfRange("random_W_element: gamma must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0 / 6.0, 1.0 / 6.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  double c[3], ph[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = amp(rng);
    ph[k] = phase(rng);
  }
  const double span_x = x_grid.back() - x_grid.front();

  std::vector<double> theta(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    const double s = span_x > 0.0 ? (x_grid[j] - x_grid.front()) / span_x : 0.0;
    double v = 0.5;
    for (int k = 0; k < 3; ++k) v += c[k] * std::sin((k + 1) * 3.141592653589793 * s + ph[k]);
    theta[j] = std::clamp(v, 0.0, 1.0);
  }

  Grid2D u(nt, std::vector<double>(nx));
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nx; ++j) u[i][j] = d1[i] + theta[j] * (d2[i] - d1[i]);

  // Slope limit in T: the inherited drop between adjacent rows may not exceed
  // gamma * dt. With the gammas this model produces the limiter rarely fires.
  for (std::size_t i = 0; i + 1 < nt; ++i) {
    const double dt = t_grid[i + 1] - t_grid[i];
    for (std::size_t j = 0; j < nx; ++j) {
      const double floor_v = u[i][j] - gamma * dt;
      if (u[i + 1][j] < floor_v) u[i + 1][j] = floor_v;
      if (u[i + 1][j] > u[i][j]) u[i + 1][j] = u[i][j];
    }
  }
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nx; ++j) u[i][j] = std::clamp(u[i][j], d1[i], d2[i]);

  std::string worst;
  if (!is_W_member(t_grid, x_grid, u, d1, d2, gamma, 1e-12, &worst))
    throw NumericalError("random_W_element: draw failed membership at " + worst);
  return u;
}

namespace detail {

inline CheckResult band_check(const std::string& name, const std::string& claim,
                              std::span<const double> t_grid, std::span<const double> x_grid,
                              const Grid2D& values, std::span<const double> d1,
                              std::span<const double> d2, double tol) {
  CheckResult c;
  c.name = name;
  c.claim = claim;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
      const double m =
          std::min(values[i][j] - (d1[i] - tol), (d2[i] + tol) - values[i][j]);
      if (m < margin) {
        margin = m;
        c.worst = at_location(t_grid[i], x_grid[j]);
      }
    }
  }
  c.margin = margin;
  c.pass = margin >= 0.0;
  return c;
}

}  // namespace detail

// Re-checks every implemented claim against an already-solved surface and
// returns a structured report; check failures are entries, not exceptions.
inline VerificationReport verify_surface(const GapSurface& s, const Potential& pot,
                                         const Params& params, const SolverConfig& config,
                                         double tau, const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.params = params;
  rep.config = config;
  rep.tau = tau;
  rep.potential_desc = pot.describe();

  const SimpleGapProblem p1 = simple_gap_problem(params.u1, params);
  const SimpleGapProblem p2 = simple_gap_problem(params.u2, params);
  const double tau1 = critical_temperature(p1);
  const double tau2 = critical_temperature(p2);

  {
    CheckResult c;
    c.name = "tau-order";
    c.claim = "tau1 < tau2";
    c.margin = tau2 - tau1;
    c.pass = c.margin > 0.0;
    std::ostringstream o;
    o << "tau1=" << tau1 << ", tau2=" << tau2;
    c.worst = o.str();
    rep.checks.push_back(c);
  }

  {
    CheckResult c;
    c.name = "curve-order";
    c.claim = "Delta1(T) < Delta2(T) for T < tau2; both vanish for T >= tau2";
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < opt.curve_points; ++k) {
      const double t = tau2 * double(k) / double(opt.curve_points);
      const double gap = detail::delta_at_known_tau(p2, t, tau2) -
                         detail::delta_at_known_tau(p1, t, tau1);
      if (gap - params.root_tol < margin) {
        margin = gap - params.root_tol;
        c.worst = detail::at_location(t, 0.0);
      }
    }
    for (double t : {tau2, 1.05 * tau2}) {
      const double residue = std::max(detail::delta_at_known_tau(p1, t, tau1),
                                      detail::delta_at_known_tau(p2, t, tau2));
      if (-residue < margin) {
        margin = -residue;
        c.worst = detail::at_location(t, 0.0) + " (nonzero above tau2)";
      }
    }
    c.margin = margin;
    c.pass = margin >= 0.0;
    rep.checks.push_back(c);
  }

  BoundConstants bc;
  bool have_bc = false;
  std::string bc_note;
  try {
    bc = bound_constants(params, tau);
    have_bc = true;
  } catch (const ConfigError& e) {
    bc_note = e.what();
  }

  {
    CheckResult c;
    c.name = "feasibility";
    c.claim = "u2 * a < 1";
    if (have_bc) {
      c.margin = 1.0 - params.u2 * bc.a;
      c.pass = bc.feasible;
      std::ostringstream o;
      o << "a=" << bc.a << ", u2*a=" << params.u2 * bc.a;
      c.worst = o.str();
    } else {
      c.pass = false;
      c.margin = -1.0;
      c.worst = bc_note;
    }
    rep.checks.push_back(c);
  }
  const bool gamma_ok = have_bc && bc.feasible;

  std::vector<double> d1v(s.t_grid.size()), d2v(s.t_grid.size());
  for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
    d1v[i] = detail::delta_at_known_tau(p1, s.t_grid[i], tau1);
    d2v[i] = detail::delta_at_known_tau(p2, s.t_grid[i], tau2);
  }

  rep.checks.push_back(detail::band_check("surface-sandwich",
                                          "Delta1(T) <= u(T,x) <= Delta2(T)", s.t_grid,
                                          s.x_grid, s.values, d1v, d2v, opt.band_tol));

  {
    CheckResult c;
    c.name = "surface-monotone";
    c.claim = "u(T,x) nonincreasing in T";
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < s.t_grid.size(); ++i) {
      for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
        const double m = s.values[i][j] - s.values[i + 1][j] + opt.monotone_tol;
        if (m < margin) {
          margin = m;
          c.worst = detail::at_location(s.t_grid[i + 1], s.x_grid[j]);
        }
      }
    }
    c.margin = margin;
    c.pass = margin >= 0.0;
    rep.checks.push_back(c);
  }

  {
    CheckResult c;
    c.name = "surface-lipschitz";
    c.claim = "u(T,x) - u(T',x) <= gamma (T' - T)";
    if (!gamma_ok) {
      c.skipped = true;
      c.worst = "skipped: no gamma (infeasible coupling or tau >= tau0)";
    } else {
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < s.t_grid.size(); ++i) {
        const double dt = s.t_grid[i + 1] - s.t_grid[i];
        for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
          const double quotient = (s.values[i][j] - s.values[i + 1][j]) / dt;
          const double m = bc.gamma + opt.lipschitz_tol - quotient;
          if (m < margin) {
            margin = m;
            c.worst = detail::at_location(s.t_grid[i + 1], s.x_grid[j]);
          }
        }
      }
      c.margin = margin;
      c.pass = margin >= 0.0;
    }
    rep.checks.push_back(c);
  }

  {
    CheckResult c;
    c.name = "fixed-point-residual";
    c.claim = "sup |Au - u| < fp_tol";
    double worst_res = 0.0;
    for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
      const auto au =
          apply_A(s.x_grid, s.values[i], s.t_grid[i], pot, params, config.interpolation);
      for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
        const double r = std::fabs(au[j] - s.values[i][j]);
        if (r > worst_res) {
          worst_res = r;
          c.worst = detail::at_location(s.t_grid[i], s.x_grid[j]);
        }
      }
    }
    c.margin = config.fp_tol - worst_res;
    c.pass = c.margin > 0.0;
    rep.checks.push_back(c);
  }

  {
    CheckResult c;
    c.name = "uniform-bound";
    c.claim = "u(T,x) <= Delta2(0)";
    const double cap = gap_at_zero(p2);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
      for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
        const double m = cap + opt.band_tol - s.values[i][j];
        if (m < margin) {
          margin = m;
          c.worst = detail::at_location(s.t_grid[i], s.x_grid[j]);
        }
      }
    }
    c.margin = margin;
    c.pass = margin >= 0.0;
    rep.checks.push_back(c);
  }

  rep.checks.push_back(check_G_monotone(params, opt.g_samples, opt.seed));

  // Operator checks on random admissible functions; need gamma.
  CheckResult cont{"operator-continuity", "|Au - Av| <= (U2/U1) |u - v|", false, false, 0.0, ""};
  CheckResult img{"image-monotone-lipschitz", "0 <= Au(T,x) - Au(T',x) <= gamma (T' - T)",
                  false, false, 0.0, ""};
  CheckResult imgband{"image-sandwich", "Delta1(T) <= Au(T,x) <= Delta2(T)", false, false, 0.0,
                      ""};
  if (!gamma_ok) {
    for (auto* c : {&cont, &img, &imgband}) {
      c->skipped = true;
      c->worst = "skipped: no gamma (infeasible coupling or tau >= tau0)";
    }
  } else {
    const int draws = std::max(2, opt.w_draws);
    double cont_margin = std::numeric_limits<double>::infinity();
    double img_margin = std::numeric_limits<double>::infinity();
    double band_margin = std::numeric_limits<double>::infinity();
    Grid2D prev_u, prev_au;
    for (int k = 0; k < draws; ++k) {
      const Grid2D u =
          random_W_element(opt.seed + 1000 + static_cast<std::uint64_t>(k), s.t_grid, s.x_grid,
                           d1v, d2v, bc.gamma);
      Grid2D au(s.t_grid.size());
      for (std::size_t i = 0; i < s.t_grid.size(); ++i)
        au[i] = apply_A(s.x_grid, u[i], s.t_grid[i], pot, params, config.interpolation);

      for (std::size_t i = 0; i + 1 < s.t_grid.size(); ++i) {
        const double dt = s.t_grid[i + 1] - s.t_grid[i];
        for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
          const double diff = au[i][j] - au[i + 1][j];
          const double m =
              std::min(diff + opt.image_lower_tol, bc.gamma * dt + opt.lipschitz_tol - diff);
          if (m < img_margin) {
            img_margin = m;
            img.worst = "draw " + std::to_string(k) + ", " +
                        detail::at_location(s.t_grid[i + 1], s.x_grid[j]);
          }
        }
      }
      for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
        for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
          const double m = std::min(au[i][j] - (d1v[i] - opt.band_tol),
                                    (d2v[i] + opt.band_tol) - au[i][j]);
          if (m < band_margin) {
            band_margin = m;
            imgband.worst = "draw " + std::to_string(k) + ", " +
                            detail::at_location(s.t_grid[i], s.x_grid[j]);
          }
        }
      }
      if (k % 2 == 1) {
        double du = 0.0, dau = 0.0;
        for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
          for (std::size_t j = 0; j < s.x_grid.size(); ++j) {
            du = std::max(du, std::fabs(u[i][j] - prev_u[i][j]));
            dau = std::max(dau, std::fabs(au[i][j] - prev_au[i][j]));
          }
        }
        const double m = (params.u2 / params.u1) * du + opt.continuity_tol - dau;
        if (m < cont_margin) {
          cont_margin = m;
          cont.worst = "pair " + std::to_string(k / 2);
        }
      }
      prev_u = u;
      prev_au = std::move(au);
    }
    cont.margin = cont_margin;
    cont.pass = cont_margin >= 0.0;
    img.margin = img_margin;
    img.pass = img_margin >= 0.0;
    imgband.margin = band_margin;
    imgband.pass = band_margin >= 0.0;
  }
  rep.checks.push_back(cont);
  rep.checks.push_back(img);
  rep.checks.push_back(imgband);

  return rep;
}

// Solves the configuration, then runs every check against the solution.
inline VerificationReport verify_all(const Potential& pot, const Params& params,
                                     const SolverConfig& config, double tau,
                                     const VerifyOptions& opt = {}) {
  validate(config);
  const auto t_grid = linspace(0.0, tau, config.t_nodes);
  const SurfaceResult solved = solve_on_grid(pot, t_grid, config, params);
  return verify_surface(solved.surface, pot, params, config, tau, opt);
}

}  // namespace bcsgap
