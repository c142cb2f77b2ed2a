#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcsgap/bounds.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/solver.hpp"
#include "bcsgap/verify.hpp"

namespace bcsgap::io {

using nlohmann::json;

// All numeric file output goes through one formatter: 12 significant digits,
// below quadrature noise and above every test tolerance.
inline std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_curve_csv(const std::filesystem::path& path, const GapCurve& c) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << "T,delta\n";
  for (std::size_t i = 0; i < c.t_grid.size(); ++i)
    out << format_sig(c.t_grid[i]) << "," << format_sig(c.values[i]) << "\n";
}

inline void write_surface_csv(const std::filesystem::path& path, const GapSurface& s) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << "T,x,u\n";
  for (std::size_t i = 0; i < s.t_grid.size(); ++i)
    for (std::size_t j = 0; j < s.x_grid.size(); ++j)
      out << format_sig(s.t_grid[i]) << "," << format_sig(s.x_grid[j]) << ","
          << format_sig(s.values[i][j]) << "\n";
}

inline GapSurface read_surface_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "T,x,u")
    throw ConfigError(path.string() + ": expected header \"T,x,u\"");
  GapSurface s;
  std::vector<double> row_x;
  std::vector<double> row_u;
  double current_t = 0.0;
  bool have_t = false;
  int lineno = 1;
  const auto flush_row = [&]() {
    if (!have_t) return;
    if (!s.x_grid.empty() && row_x != s.x_grid)
      throw ConfigError(path.string() + ": ragged x grid near line " + std::to_string(lineno));
    if (s.x_grid.empty()) s.x_grid = row_x;
    if (!s.t_grid.empty() && !(current_t > s.t_grid.back()))
      throw ConfigError(path.string() + ": temperatures must increase between blocks");
    s.t_grid.push_back(current_t);
    s.values.push_back(row_u);
    row_x.clear();
    row_u.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double t, x, u;
    char c1, c2;
    if (!(ls >> t >> c1 >> x >> c2 >> u) || c1 != ',' || c2 != ',')
      throw ConfigError(path.string() + ": bad row at line " + std::to_string(lineno));
    if (!have_t || t != current_t) {
      flush_row();
      current_t = t;
      have_t = true;
    }
    row_x.push_back(x);
    row_u.push_back(u);
  }
  flush_row();
  if (s.t_grid.empty()) throw ConfigError(path.string() + ": no data rows");
  return s;
}

inline json constants_json(const BoundConstants& bc) {
  json j;
  j["z0"] = bc.z0;
  j["tau0"] = bc.tau0;
  j["tau"] = bc.tau;
  j["a"] = bc.a;
  j["b"] = bc.b;
  if (bc.feasible)
    j["gamma"] = bc.gamma;
  else
    j["gamma"] = nullptr;
  j["feasible"] = bc.feasible;
  return j;
}

inline json t1_json(const T1Report& r) {
  json j;
  j["t1"] = r.t1;
  j["u0"] = r.u0;
  j["t1_limit"] = r.t1_limit;
  j["within_limit"] = r.within_limit;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["inequality_holds"] = r.inequality_holds;
  j["pass"] = r.pass;
  return j;
}

inline json params_json(const Params& p) {
  return json{{"hbar_omega_d", p.hbar_omega_d},
              {"u1", p.u1},
              {"u2", p.u2},
              {"tol",
               {{"quad", p.quad_tol},
                {"root", p.root_tol},
                {"fixed_point", p.fp_tol},
                {"max_iters", p.max_iters}}}};
}

inline json solver_json(const SolverConfig& c) {
  return json{{"x_nodes", c.x_nodes},
              {"t_nodes", c.t_nodes},
              {"damping", c.damping},
              {"fp_tol", c.fp_tol},
              {"max_iters", c.max_iters},
              {"interpolation", c.interpolation == Interp::linear ? "linear" : "cubic"}};
}

inline json report_json(const VerificationReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(json{{"name", c.name},
                          {"claim", c.claim},
                          {"pass", c.pass},
                          {"skipped", c.skipped},
                          {"margin", c.margin},
                          {"worst", c.worst}});
  }
  return json{{"all_pass", rep.all_pass()},
              {"checks", checks},
              {"config",
               {{"params", params_json(rep.params)},
                {"solver", solver_json(rep.config)},
                {"tau", rep.tau},
                {"potential", rep.potential_desc}}}};
}

inline json traces_json(std::span<const double> t_grid,
                        const std::vector<IterationTrace>& traces) {
  json arr = json::array();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    arr.push_back(json{{"t", i < t_grid.size() ? t_grid[i] : 0.0},
                       {"iterations", traces[i].iterations},
                       {"converged", traces[i].converged},
                       {"residuals", traces[i].residuals}});
  }
  return arr;
}

struct ToolConfig {
  Params params;
  SolverConfig solver;
  std::optional<Potential> potential;  // defaults to constant(u1)
  std::optional<double> tau;           // explicit tau overrides tau_fraction
  double tau_fraction = 0.9;           // of tau0
  int curve_nodes = 65;
  std::uint64_t seed = 20250801;
  std::optional<double> t1;
  std::optional<double> u0;

  const Potential& resolved_potential() const {
    if (!potential) throw ConfigError("config: potential not resolved");
    return *potential;
  }
  double resolve_tau() const {
    if (tau) return *tau;
    return tau_fraction * solve_tau0(params);
  }
};

namespace detail {

inline double positive_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("config: \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline std::function<double(double)> parse_factor(const json& j, const std::string& field) {
  if (j.is_number()) {
    const double v = j.get<double>();
    return [v](double) { return v; };
  }
  if (!j.is_object() || !j.contains("nodes") || !j.contains("values"))
    throw ConfigError("config: separable factor \"" + field +
                      "\" needs {nodes, values} or a constant");
  const auto nodes = j.at("nodes").get<std::vector<double>>();
  const auto values = j.at("values").get<std::vector<double>>();
  auto interp = std::make_shared<Interpolant>(nodes, values, Interp::linear);
  return [interp](double x) { return (*interp)(x); };
}

inline Potential parse_potential(const json& j, double hw) {
  if (!j.contains("kind")) throw ConfigError("config: potential needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    return Potential::constant(j.at("value").get<double>(), hw);
  }
  if (kind == "separable") {
    return Potential::separable(parse_factor(j.at("f"), "f"), parse_factor(j.at("g"), "g"), hw);
  }
  if (kind == "tabulated") {
    const auto values = j.at("values").get<std::vector<std::vector<double>>>();
    if (values.empty() || values.front().empty())
      throw ConfigError("config: tabulated potential needs a nonempty values matrix");
    std::vector<double> xn, xin;
    if (j.contains("x_nodes"))
      xn = j.at("x_nodes").get<std::vector<double>>();
    else
      xn = linspace(0.0, hw, static_cast<int>(values.size()));
    if (j.contains("xi_nodes"))
      xin = j.at("xi_nodes").get<std::vector<double>>();
    else
      xin = linspace(0.0, hw, static_cast<int>(values.front().size()));
    if (xn.empty() || xin.empty() || xn.back() != hw || xin.back() != hw)
      throw ConfigError("config: tabulated lattice must span [0, hbar_omega_d]");
    return Potential::tabulated(std::move(xn), std::move(xin), values);
  }
  throw ConfigError("config: unknown potential kind \"" + kind + "\"");
}

}  // namespace detail

inline ToolConfig parse_config(const json& j) {
  ToolConfig cfg;
  const double hw = detail::positive_number(j, "hbar_omega_d", 1.0);
  const double u1 = detail::positive_number(j, "u1", 0.3);
  const double u2 = detail::positive_number(j, "u2", 0.35);
  double quad = 1e-12, root = 1e-10, fp = 1e-9;
  int max_iters = 500;
  if (j.contains("tol")) {
    const auto& t = j.at("tol");
    quad = detail::positive_number(t, "quad", quad);
    root = detail::positive_number(t, "root", root);
    fp = detail::positive_number(t, "fixed_point", fp);
    if (t.contains("max_iters")) max_iters = t.at("max_iters").get<int>();
  }
  cfg.params = make_params(hw, u1, u2, quad, root, fp, max_iters);

  if (j.contains("solver")) {
    const auto& sj = j.at("solver");
    if (sj.contains("x_nodes")) cfg.solver.x_nodes = sj.at("x_nodes").get<int>();
    if (sj.contains("t_nodes")) cfg.solver.t_nodes = sj.at("t_nodes").get<int>();
    if (sj.contains("damping")) cfg.solver.damping = sj.at("damping").get<double>();
    if (sj.contains("interpolation")) {
      const std::string k = sj.at("interpolation").get<std::string>();
      if (k == "linear")
        cfg.solver.interpolation = Interp::linear;
      else if (k == "cubic")
        cfg.solver.interpolation = Interp::cubic;
      else
        throw ConfigError("config: interpolation must be \"linear\" or \"cubic\"");
    }
  }
  cfg.solver.fp_tol = cfg.params.fp_tol;
  cfg.solver.max_iters = cfg.params.max_iters;
  validate(cfg.solver);

  if (j.contains("potential"))
    cfg.potential = detail::parse_potential(j.at("potential"), hw);
  else
    cfg.potential = Potential::constant(u1, hw);

  if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
  if (j.contains("tau_fraction")) cfg.tau_fraction = j.at("tau_fraction").get<double>();
  if (!(cfg.tau_fraction > 0.0) || cfg.tau_fraction >= 1.0)
    throw ConfigError("config: tau_fraction must lie in (0, 1)");
  if (j.contains("curve_nodes")) cfg.curve_nodes = j.at("curve_nodes").get<int>();
  if (cfg.curve_nodes < 1) throw ConfigError("config: curve_nodes must be positive");
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("t1")) cfg.t1 = j.at("t1").get<double>();
  if (j.contains("u0")) cfg.u0 = j.at("u0").get<double>();
  return cfg;
}

inline ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

}  // namespace bcsgap::io
