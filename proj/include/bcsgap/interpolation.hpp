#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bcsgap/errors.hpp"

namespace bcsgap {

enum class Interp { linear, cubic };

// Piecewise interpolant over a strictly increasing grid. linear evaluates
// convex combinations of the nodal values, so it preserves any band the nodes
// live in. cubic is a Hermite interpolant with three-point slopes; it is more
// accurate for smooth data but may overshoot between nodes.
class Interpolant {
 public:
  Interpolant(std::span<const double> grid, std::span<const double> values, Interp kind)
      : grid_(grid.begin(), grid.end()), values_(values.begin(), values.end()), kind_(kind) {
    if (grid_.size() != values_.size() || grid_.size() < 2)
      throw OutOfRange("interpolant: need matching grid/values with at least 2 nodes");
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
      if (!(grid_[i] < grid_[i + 1])) throw OutOfRange("interpolant: grid must be strictly increasing");
    if (kind_ == Interp::cubic) build_slopes();
  }

  double operator()(double x) const {
    if (x <= grid_.front()) return values_.front();
    if (x >= grid_.back()) return values_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double h = grid_[i + 1] - grid_[i];
    const double s = (x - grid_[i]) / h;
    if (kind_ == Interp::linear) return std::lerp(values_[i], values_[i + 1], s);
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * values_[i] + (s3 - 2.0 * s2 + s) * h * slopes_[i] +
           (-2.0 * s3 + 3.0 * s2) * values_[i + 1] + (s3 - s2) * h * slopes_[i + 1];
  }

 private:
  void build_slopes() {
    const std::size_t n = grid_.size();
    slopes_.resize(n);
    const auto secant = [&](std::size_t i) {
      return (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
    };
    slopes_.front() = secant(0);
    slopes_.back() = secant(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = grid_[i] - grid_[i - 1];
      const double hr = grid_[i + 1] - grid_[i];
      slopes_[i] = (secant(i - 1) * hr + secant(i) * hl) / (hl + hr);
    }
  }

  std::vector<double> grid_, values_, slopes_;
  Interp kind_;
};

inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw OutOfRange("linspace: need at least one node");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = a;
    return g;
  }
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * double(i) / double(n - 1);
  g.back() = b;
  return g;
}

}  // namespace bcsgap
