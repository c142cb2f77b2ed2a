// bcsgap: solves the BCS gap equation u = Au by damped fixed-point iteration,
// computes the constant-coupling reference curves and the structural
// constants (z0, tau0, a, b, gamma), and re-checks the analytic properties of
// the solution as an executable report.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bcsgap/io.hpp"

namespace fs = std::filesystem;
using bcsgap::io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 verification failure, 2 config/feasibility error,
// 3 numerical failure.
enum ExitCode { kOk = 0, kVerifyFail = 1, kConfigFail = 2, kNumericFail = 3 };

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw bcsgap::ConfigError("cannot open " + path.string() + " for writing");
  out << text;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["config_path"] = config_path;
  m["output_paths"] = outputs;
  m["timestamp"] = timestamp_utc();
  m["tool_version"] = kVersion;
  write_text(out_dir / "manifest.json", m.dump(2) + "\n");
}

struct Ctx {
  bcsgap::io::ToolConfig cfg;
  std::string config_path;
  fs::path out_dir;
};

int cmd_curves(const Ctx& ctx, bool with_delta0) {
  const auto& params = ctx.cfg.params;
  const auto p1 = bcsgap::simple_gap_problem(params.u1, params);
  const auto p2 = bcsgap::simple_gap_problem(params.u2, params);
  const double tau2 = bcsgap::critical_temperature(p2);
  const auto grid = bcsgap::linspace(0.0, tau2, ctx.cfg.curve_nodes);

  std::vector<std::string> outputs;
  const auto c1 = bcsgap::delta_curve(p1, grid);
  const auto c2 = bcsgap::delta_curve(p2, grid);
  bcsgap::io::write_curve_csv(ctx.out_dir / "delta1.csv", c1);
  bcsgap::io::write_curve_csv(ctx.out_dir / "delta2.csv", c2);
  outputs = {"delta1.csv", "delta2.csv"};
  if (with_delta0) {
    const double u0 = ctx.cfg.u0.value_or(0.9 * params.u1);
    const auto p0 = bcsgap::simple_gap_problem(u0, params);
    bcsgap::io::write_curve_csv(ctx.out_dir / "delta0.csv", bcsgap::delta_curve(p0, grid));
    outputs.push_back("delta0.csv");
  }
  write_manifest(ctx.out_dir, "curves", ctx.config_path, outputs);
  std::cout << "tau1 = " << bcsgap::io::format_sig(c1.tau)
            << "\ntau2 = " << bcsgap::io::format_sig(c2.tau) << "\nwrote";
  for (const auto& name : outputs) std::cout << " " << (ctx.out_dir / name).string();
  std::cout << "\n";
  return kOk;
}

int cmd_constants(const Ctx& ctx) {
  const double tau = ctx.cfg.resolve_tau();
  const auto bc = bcsgap::bound_constants(ctx.cfg.params, tau);
  json j = bcsgap::io::constants_json(bc);
  if (!bc.feasible) {
    j["error"] = {{"type", "InfeasibleCoupling"},
                  {"detail", "u2 * a >= 1; choose u2 below 1/a"},
                  {"u2", ctx.cfg.params.u2},
                  {"a", bc.a}};
  }
  const std::string text = j.dump(2) + "\n";
  write_text(ctx.out_dir / "constants.json", text);
  write_manifest(ctx.out_dir, "constants", ctx.config_path, {"constants.json"});
  std::cout << text;
  return bc.feasible ? kOk : kConfigFail;
}

int cmd_solve(const Ctx& ctx) {
  const double tau = ctx.cfg.resolve_tau();
  const auto& pot = ctx.cfg.resolved_potential();
  bcsgap::validate_potential(pot, ctx.cfg.params);
  bcsgap::SurfaceResult res;
  try {
    res = bcsgap::solve_surface(pot, tau, ctx.cfg.solver, ctx.cfg.params);
  } catch (const bcsgap::NoConvergence& e) {
    json err = {{"error", {{"type", "NoConvergence"}, {"detail", e.what()}, {"t", e.t}}},
                {"residuals", e.trace.residuals}};
    write_text(ctx.out_dir / "trace.json", err.dump(2) + "\n");
    std::cerr << err.dump(2) << "\n";
    return kNumericFail;
  }
  bcsgap::io::write_surface_csv(ctx.out_dir / "surface.csv", res.surface);
  write_text(ctx.out_dir / "trace.json",
             bcsgap::io::traces_json(res.surface.t_grid, res.traces).dump(2) + "\n");
  write_manifest(ctx.out_dir, "solve", ctx.config_path, {"surface.csv", "trace.json"});
  std::cout << "solved " << res.surface.t_grid.size() << "x" << res.surface.x_grid.size()
            << " surface on [0, " << bcsgap::io::format_sig(tau) << "] x [0, "
            << bcsgap::io::format_sig(ctx.cfg.params.hbar_omega_d) << "]\nwrote "
            << (ctx.out_dir / "surface.csv").string() << "\n";
  return kOk;
}

int cmd_verify(const Ctx& ctx, const std::string& surface_path) {
  const auto& pot = ctx.cfg.resolved_potential();
  bcsgap::validate_potential(pot, ctx.cfg.params);
  bcsgap::VerifyOptions opt;
  opt.seed = ctx.cfg.seed;
  bcsgap::VerificationReport rep;
  if (!surface_path.empty()) {
    const auto surface = bcsgap::io::read_surface_csv(surface_path);
    const double tau = surface.t_grid.back();
    rep = bcsgap::verify_surface(surface, pot, ctx.cfg.params, ctx.cfg.solver, tau, opt);
  } else {
    rep = bcsgap::verify_all(pot, ctx.cfg.params, ctx.cfg.solver, ctx.cfg.resolve_tau(), opt);
  }
  write_text(ctx.out_dir / "report.json", bcsgap::io::report_json(rep).dump(2) + "\n");
  write_manifest(ctx.out_dir, "verify", ctx.config_path, {"report.json"});
  for (const auto& c : rep.checks) {
    const char* tag = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
    std::cout << "[" << tag << "] " << c.name << ": " << c.claim;
    if (!c.skipped) std::cout << " (margin " << bcsgap::io::format_sig(c.margin) << ")";
    std::cout << "\n";
  }
  std::cout << (rep.all_pass() ? "all checks passed" : "verification FAILED") << "\n";
  return rep.all_pass() ? kOk : kVerifyFail;
}

int cmd_t1_check(const Ctx& ctx, std::optional<double> t1_flag, std::optional<double> u0_flag) {
  const auto& params = ctx.cfg.params;
  const double u0 = u0_flag.value_or(ctx.cfg.u0.value_or(0.9 * params.u1));
  double t1;
  if (t1_flag)
    t1 = *t1_flag;
  else if (ctx.cfg.t1)
    t1 = *ctx.cfg.t1;
  else {
    const auto p0 = bcsgap::simple_gap_problem(u0, params);
    t1 = 0.5 * bcsgap::delta_inverse(p0, 0.5 * bcsgap::gap_at_zero(p0));
  }
  const auto rep = bcsgap::check_t1_inequality(params, t1, u0);
  const std::string text = bcsgap::io::t1_json(rep).dump(2) + "\n";
  write_text(ctx.out_dir / "t1_report.json", text);
  write_manifest(ctx.out_dir, "t1-check", ctx.config_path, {"t1_report.json"});
  std::cout << text;
  return rep.pass ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bcsgap: BCS gap equation solver and property checker"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", seed, "override the config's random seed");
  app.fallthrough();

  auto* curves = app.add_subcommand("curves", "emit the two reference gap curves as CSV");
  bool with_delta0 = false;
  curves->add_flag("--with-delta0", with_delta0, "also emit the lower auxiliary curve");

  auto* constants =
      app.add_subcommand("constants", "compute z0, tau0, a, b, gamma and the feasibility flag");

  auto* solve = app.add_subcommand("solve", "solve the gap surface and write CSV + traces");

  auto* verify = app.add_subcommand("verify", "run every property check, exit nonzero on failure");
  std::string surface_path;
  verify->add_option("--surface", surface_path, "check an existing surface CSV instead of solving")
      ->check(CLI::ExistingFile);

  auto* t1check = app.add_subcommand("t1-check", "evaluate the small-temperature condition on T1");
  std::optional<double> t1_flag, u0_flag;
  t1check->add_option("--t1", t1_flag, "temperature T1 to test");
  t1check->add_option("--u0", u0_flag, "auxiliary coupling below u1 (default 0.9 u1)");

  CLI11_PARSE(app, argc, argv);

  try {
    Ctx ctx;
    ctx.config_path = config_path;
    if (!config_path.empty())
      ctx.cfg = bcsgap::io::load_config(config_path);
    else
      ctx.cfg.potential = bcsgap::Potential::constant(ctx.cfg.params.u1, ctx.cfg.params.hbar_omega_d);
    if (seed) ctx.cfg.seed = *seed;
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);

    if (curves->parsed()) return cmd_curves(ctx, with_delta0);
    if (constants->parsed()) return cmd_constants(ctx);
    if (solve->parsed()) return cmd_solve(ctx);
    if (verify->parsed()) return cmd_verify(ctx, surface_path);
    if (t1check->parsed()) return cmd_t1_check(ctx, t1_flag, u0_flag);
    return kConfigFail;
  } catch (const bcsgap::InfeasibleCoupling& e) {
    json err = {{"error",
                 {{"type", "InfeasibleCoupling"}, {"detail", e.what()}, {"u2", e.u2}, {"a", e.a}}}};
    std::cerr << err.dump(2) << "\n";
    return kConfigFail;
  } catch (const bcsgap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFail;
  } catch (const bcsgap::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigFail;
  }
}
