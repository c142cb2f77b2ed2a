#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bcsgap/errors.hpp"
#include "bcsgap/interpolation.hpp"

namespace bcsgap {

// Units: k_B = 1, so temperature and energy share units; the couplings are
// dimensionless and the Debye cutoff is the only scale in the problem.
struct Params {
  double hbar_omega_d = 1.0;
  double u1 = 0.3;   // lower coupling bound
  double u2 = 0.35;  // upper coupling bound
  double quad_tol = 1e-12;
  double root_tol = 1e-10;
  double fp_tol = 1e-9;
  int max_iters = 500;
};

inline Params make_params(double hbar_omega_d, double u1, double u2, double quad_tol = 1e-12,
                          double root_tol = 1e-10, double fp_tol = 1e-9, int max_iters = 500) {
  if (!(hbar_omega_d > 0.0)) throw NonPositiveInput("params: hbar_omega_d must be positive");
  if (!(u1 > 0.0) || !(u2 > 0.0)) throw NonPositiveInput("params: couplings must be positive");
  if (u1 > u2) throw CouplingOrder("params: u1 must not exceed u2");
  if (!(quad_tol > 0.0) || !(root_tol > 0.0) || !(fp_tol > 0.0))
    throw NonPositiveInput("params: tolerances must be positive");
  if (max_iters < 1) throw NonPositiveInput("params: max_iters must be positive");
  return Params{hbar_omega_d, u1, u2, quad_tol, root_tol, fp_tol, max_iters};
}

enum class PotentialKind { constant, separable, tabulated };

// The coupling potential U(x, xi) on [0, hbar_omega_d]^2. Three kinds:
// a constant, a separable product f(x) g(xi) of continuous factors, or a
// bilinearly interpolated lattice. All three are continuous by construction
// and bilinear interpolation cannot leave the lattice's value range.
class Potential {
 public:
  static Potential constant(double value, double domain) {
    if (!(domain > 0.0)) throw NonPositiveInput("potential: domain must be positive");
    Potential p;
    p.kind_ = PotentialKind::constant;
    p.domain_ = domain;
    p.value_ = value;
    return p;
  }

  static Potential separable(std::function<double(double)> f, std::function<double(double)> g,
                             double domain) {
    if (!(domain > 0.0)) throw NonPositiveInput("potential: domain must be positive");
    if (!f || !g) throw ConfigError("potential: separable factors must be callable");
    Potential p;
    p.kind_ = PotentialKind::separable;
    p.domain_ = domain;
    p.f_ = std::move(f);
    p.g_ = std::move(g);
    return p;
  }

  static Potential tabulated(std::vector<double> x_nodes, std::vector<double> xi_nodes,
                             std::vector<std::vector<double>> values) {
    Potential p;
    p.kind_ = PotentialKind::tabulated;
    p.x_nodes_ = std::move(x_nodes);
    p.xi_nodes_ = std::move(xi_nodes);
    p.table_ = std::move(values);
    check_lattice_axis(p.x_nodes_);
    check_lattice_axis(p.xi_nodes_);
    if (p.x_nodes_.back() != p.xi_nodes_.back())
      throw ConfigError("potential: lattice must cover a square domain");
    if (p.table_.size() != p.x_nodes_.size())
      throw ConfigError("potential: lattice row count must match x nodes");
    for (const auto& row : p.table_)
      if (row.size() != p.xi_nodes_.size())
        throw ConfigError("potential: lattice column count must match xi nodes");
    p.domain_ = p.xi_nodes_.back();
    p.xi_breaks_.assign(p.xi_nodes_.begin() + 1, p.xi_nodes_.end() - 1);
    return p;
  }

  double operator()(double x, double xi) const {
    if (x < 0.0 || x > domain_ || xi < 0.0 || xi > domain_)
      throw OutOfDomain("potential: evaluation outside [0, hbar_omega_d]^2");
    switch (kind_) {
      case PotentialKind::constant:
        return value_;
      case PotentialKind::separable:
        return f_(x) * g_(xi);
      case PotentialKind::tabulated:
        return bilinear(x, xi);
    }
    return value_;
  }

  PotentialKind kind() const { return kind_; }
  double domain() const { return domain_; }

  // Interior lattice lines in xi, for seeding quadrature panels on the kinks
  // of the bilinear interpolant. Empty for the smooth kinds.
  const std::vector<double>& xi_breakpoints() const { return xi_breaks_; }

  std::string describe() const {
    switch (kind_) {
      case PotentialKind::constant:
        return "constant(" + std::to_string(value_) + ")";
      case PotentialKind::separable:
        return "separable";
      case PotentialKind::tabulated:
        return "tabulated " + std::to_string(x_nodes_.size()) + "x" +
               std::to_string(xi_nodes_.size());
    }
    return "";
  }

 private:
  Potential() = default;

  static void check_lattice_axis(const std::vector<double>& nodes) {
    if (nodes.size() < 2) throw ConfigError("potential: lattice needs at least 2 nodes per axis");
    if (nodes.front() != 0.0) throw ConfigError("potential: lattice must start at 0");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      if (!(nodes[i] < nodes[i + 1]))
        throw ConfigError("potential: lattice nodes must be strictly increasing");
  }

  static std::size_t cell(const std::vector<double>& nodes, double v) {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
    std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    if (i == 0) return 0;
    if (i >= nodes.size()) return nodes.size() - 2;
    return i - 1;
  }

  double bilinear(double x, double xi) const {
    const std::size_t i = cell(x_nodes_, x);
    const std::size_t j = cell(xi_nodes_, xi);
    const double sx = (x - x_nodes_[i]) / (x_nodes_[i + 1] - x_nodes_[i]);
    const double sj = (xi - xi_nodes_[j]) / (xi_nodes_[j + 1] - xi_nodes_[j]);
    // std::lerp keeps the result inside the lattice's value range exactly
    const double lo = std::lerp(table_[i][j], table_[i][j + 1], sj);
    const double hi = std::lerp(table_[i + 1][j], table_[i + 1][j + 1], sj);
    return std::lerp(lo, hi, sx);
  }

  PotentialKind kind_ = PotentialKind::constant;
  double domain_ = 1.0;
  double value_ = 0.0;
  std::function<double(double)> f_, g_;
  std::vector<double> x_nodes_, xi_nodes_;
  std::vector<std::vector<double>> table_;
  std::vector<double> xi_breaks_;
};

inline double eval_potential(const Potential& p, double x, double xi) { return p(x, xi); }

struct PotentialScan {
  double min_value = 0.0;
  double max_value = 0.0;
  std::array<double, 2> min_at{0.0, 0.0};
  std::array<double, 2> max_at{0.0, 0.0};
  bool pass = false;
};

// Samples U on a dense lattice and reports its range against [U1, U2].
// Potentials are opaque evaluators, so sampling is the general check; the
// comparison is non-strict on both ends.
inline PotentialScan scan_potential(const Potential& p, const Params& params,
                                    int lattice_density = 256) {
  if (lattice_density < 2) throw OutOfRange("scan_potential: lattice density must be >= 2");
  const auto nodes = linspace(0.0, params.hbar_omega_d, lattice_density);
  PotentialScan s;
  s.min_value = std::numeric_limits<double>::infinity();
  s.max_value = -std::numeric_limits<double>::infinity();
  for (double x : nodes) {
    for (double xi : nodes) {
      const double v = p(x, xi);
      if (v < s.min_value) {
        s.min_value = v;
        s.min_at = {x, xi};
      }
      if (v > s.max_value) {
        s.max_value = v;
        s.max_at = {x, xi};
      }
    }
  }
  s.pass = s.min_value >= params.u1 && s.max_value <= params.u2;
  return s;
}

inline PotentialScan validate_potential(const Potential& p, const Params& params,
                                        int lattice_density = 256) {
  const PotentialScan s = scan_potential(p, params, lattice_density);
  if (!s.pass) {
    const bool below = s.min_value < params.u1;
    const double bad = below ? s.min_value : s.max_value;
    const auto& at = below ? s.min_at : s.max_at;
    throw BoundViolation("potential: value " + std::to_string(bad) + " at (x=" +
                             std::to_string(at[0]) + ", xi=" + std::to_string(at[1]) +
                             ") leaves [U1, U2]",
                         at[0], at[1], bad);
  }
  return s;
}

// Sampled map T -> Delta(T) for one constant-coupling gap equation, together
// with that coupling's critical temperature. Values at grid points with
// T >= tau are zero (extension by zero above the critical temperature).
struct GapCurve {
  double coupling = 0.0;
  std::vector<double> t_grid;
  std::vector<double> values;
  double tau = 0.0;
};

// Sampled map (T, x) -> u(T, x); rows indexed by temperature.
struct GapSurface {
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  std::vector<std::vector<double>> values;
};

}  // namespace bcsgap
