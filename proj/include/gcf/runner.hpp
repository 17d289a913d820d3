#pragma once

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "gcf/bounds.hpp"
#include "gcf/chou_wang.hpp"
#include "gcf/config.hpp"
#include "gcf/evolution_checks.hpp"
#include "gcf/flow.hpp"
#include "gcf/glued_body.hpp"
#include "gcf/holder.hpp"
#include "gcf/measure.hpp"
#include "gcf/minkowski_ode.hpp"
#include "gcf/soliton.hpp"
#include "gcf/svg.hpp"
#include "gcf/version.hpp"

namespace gcf {

using Json = nlohmann::ordered_json;

// Exit codes: 0 all checks pass, 1 a configured check failed,
// 2 configuration error, 3 pipeline error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPipelineError = 3;

namespace detail {

inline void write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream f(path);
  if (!f) throw PipelineError("cannot write " + path.string());
  f << content;
}

inline GridSpec grid_from_config(const RunConfig& cfg, int n) {
  const int dflt = n == 1 ? 128 : 129;
  const int nodes = cfg.get_int("grid.nodes", dflt);
  return GridSpec(n == 1 ? GridKind::circle : GridKind::axisymmetric, nodes);
}

/// "ball:R", "ellipse:a,b" (alias "spheroid"), or "cos:base,amp".
inline SupportFunction body_from_spec(const GridSpec& grid,
                                      const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string id = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::istringstream in(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(in, tok, ',')) args.push_back(std::stod(tok));
  }
  if (id == "ball" && args.size() == 1)
    return SupportFunction::ball(grid, args[0]);
  if ((id == "ellipse" || id == "spheroid") && args.size() == 2)
    return SupportFunction::ellipse(grid, args[0], args[1]);
  if (id == "cos" && args.size() == 2) {
    std::vector<double> v(grid.node_count());
    for (int j = 0; j < grid.node_count(); ++j)
      v[j] = args[0] + args[1] * std::cos(grid.angle(j));
    return SupportFunction(grid, std::move(v));
  }
  throw ConfigError("unknown body spec: " + spec);
}

inline Json bound_report_json(const BoundReport& rep) {
  return Json{{"bound_id", rep.bound_id}, {"exponent", rep.exponent},
              {"sup_q", rep.sup_q},       {"median_q", rep.median_q},
              {"verdict", rep.bounded ? "bounded" : "unbounded"},
              {"window", Json::array({rep.t_lo, rep.t_hi})}};
}

inline Json holder_json(const HolderEstimate& est) {
  return Json{{"slope", est.slope},
              {"k", est.k},
              {"gamma", est.gamma},
              {"window", Json::array({est.r_lo, est.r_hi})},
              {"rms_residual", est.rms_residual},
              {"samples", est.samples}};
}

inline StepControl control_from_config(const RunConfig& cfg, double t_end,
                                       double min_radius) {
  StepControl ctl;
  ctl.t_end = cfg.get_double("t_end", t_end);
  ctl.safety = cfg.get_double("safety", ctl.safety);
  ctl.min_radius_stop = cfg.get_double("min_radius", min_radius);
  ctl.snapshot_count = cfg.get_int("snapshots", ctl.snapshot_count);
  return ctl;
}

struct RunResult {
  bool checks_passed = true;
  Json summary;
};

// --- subcommand handlers ------------------------------------------------

inline RunResult run_flow(const RunConfig& cfg,
                          const std::filesystem::path& out) {
  const int n = cfg.get_int("n", 1);
  const double alpha = cfg.get_double("alpha", 1.0);
  FlowParams params(n, alpha,
                    AnisotropyField::from_spec(cfg.get_string("f", "const:1")));
  const GridSpec grid = grid_from_config(cfg, n);
  const SupportFunction u0 =
      body_from_spec(grid, cfg.get_string("body", "ball:1"));
  const double t_barrier = barrier_time(params, u0.max_value());
  StepControl ctl =
      control_from_config(cfg, 1.05 * t_barrier, 0.01 * u0.max_value());

  const FlowTrajectory traj = evolve(u0, params, ctl);
  write_text(out / "trajectory.csv", trajectory_csv(traj));
  if (cfg.get_bool("dump.snapshots", false)) {
    char name[64];
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
      write_text(out / name, to_csv(traj.snapshots[k].u));
    }
  }

  SvgPlot plot("max Gauss curvature vs time", true, true);
  const DiagnosticSeries gs = gauss_series(traj);
  plot.add_series("K_max", gs.t, gs.q);
  plot.write((out / "kmax_loglog.svg").string());

  RunResult res;
  const bool extinct = traj.stop == StopReason::radius_floor;
  res.summary["results"] = {
      {"stop", extinct ? "radius_floor" : "time_reached"},
      {"end_time", traj.end_time()},
      {"extinction_time", extinct ? Json(traj.end_time()) : Json(nullptr)},
      {"barrier_time", t_barrier},
      {"steps", traj.step_count}};
  if (cfg.get_bool("check.barrier", true) && extinct) {
    const bool ok = traj.end_time() <= 1.02 * t_barrier;
    res.summary["checks"]["barrier_comparison"] = ok ? "pass" : "fail";
    res.checks_passed &= ok;
  }
  return res;
}

inline RunResult run_soliton(const RunConfig& cfg,
                             const std::filesystem::path& out) {
  const int n = cfg.get_int("n", 1);
  const double p = cfg.get_double("p", 0.0);
  const GridSpec grid = grid_from_config(cfg, n);
  const SupportFunction u0 = body_from_spec(
      grid, cfg.get_string("body", n == 1 ? "cos:1,0.2" : "ellipse:1,1.3"));
  StepControl ctl = control_from_config(cfg, 1.0, 1e-4 * u0.max_value());

  const SolitonCheckResult res = soliton_selfsimilarity_check(u0, p, ctl);
  std::string csv = "t,relative_deviation\n";
  char buf[80];
  for (size_t k = 0; k < res.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", res.times[k],
                  res.deviations[k]);
    csv += buf;
  }
  write_text(out / "deviation.csv", csv);
  SvgPlot plot("deviation from the homothety", false, false);
  plot.add_series("max |u - a(t) u0| / diam", res.times, res.deviations);
  plot.write((out / "deviation.svg").string());

  RunResult rr;
  const double tol = cfg.get_double("tol.soliton", 1e-3);
  rr.summary["results"] = {{"max_relative_deviation",
                            res.max_relative_deviation},
                           {"t_end", res.t_end},
                           {"alpha", 1.0 / (1.0 - p)}};
  const bool ok = res.max_relative_deviation <= tol;
  rr.summary["checks"]["self_similarity"] = ok ? "pass" : "fail";
  rr.checks_passed &= ok;
  return rr;
}

inline RunResult run_bounds(const RunConfig& cfg,
                            const std::filesystem::path& out) {
  const int n = cfg.get_int("n", 2);
  const double alpha = cfg.get_double("alpha", 0.5);
  FlowParams params(
      n, alpha,
      AnisotropyField::from_spec(cfg.get_string("f", "axis-affine:0.1")));
  const GridSpec grid = grid_from_config(cfg, n);
  const SupportFunction u0 =
      body_from_spec(grid, cfg.get_string("body", "ellipse:1,1.3"));
  StepControl ctl = control_from_config(cfg, 2.0 * barrier_time(params, u0.max_value()),
                                        0.03 * u0.max_value());
  ctl.snapshot_count = cfg.get_int("snapshots", 300);

  const FlowTrajectory traj = evolve(u0, params, ctl);
  write_text(out / "trajectory.csv", trajectory_csv(traj));

  BoundOptions opt;
  opt.window_lo_frac = cfg.get_double("window.lo", opt.window_lo_frac);
  opt.window_hi_frac = cfg.get_double("window.hi", opt.window_hi_frac);
  opt.ratio_cap = cfg.get_double("ratio.cap", opt.ratio_cap);

  RunResult rr;
  const BoundReport gauss = verify_gauss_bound(traj, params, opt);
  rr.summary["results"]["gauss"] = bound_report_json(gauss);
  rr.summary["checks"]["gauss_bounded"] = gauss.bounded ? "pass" : "fail";
  rr.checks_passed &= gauss.bounded;
  if (params.bound_regime()) {
    const BoundReport lam = verify_lambda_bound(traj, params, opt);
    rr.summary["results"]["lambda"] = bound_report_json(lam);
    rr.summary["checks"]["lambda_bounded"] = lam.bounded ? "pass" : "fail";
    rr.checks_passed &= lam.bounded;
  }

  SvgPlot plot("curvature histories", true, true);
  const DiagnosticSeries gs = gauss_series(traj), ls = lambda_series(traj);
  plot.add_series("K_max", gs.t, gs.q);
  plot.add_series("lambda_max", ls.t, ls.q);
  plot.write((out / "bounds_loglog.svg").string());
  return rr;
}

inline RunResult run_ode(const RunConfig& cfg,
                         const std::filesystem::path& out) {
  const OdeParams prm(cfg.get_int("n", 2), cfg.get_double("p", 0.0));
  SolveOptions opt;
  opt.tol = cfg.get_double("tol", opt.tol);
  opt.mesh_size = cfg.get_int("mesh.size", opt.mesh_size);
  const SolveResult sol = solve_profile(prm, cfg.get_double("r0", 0.25), opt);

  write_text(out / "profile.csv", profile_csv(sol.profile));
  Json conv;
  conv["r0_attempts"] = sol.log.r0_attempts;
  conv["iterations"] = Json::array();
  for (const auto& it : sol.log.iterations)
    conv["iterations"].push_back(
        {{"i", it.index}, {"delta", it.delta}, {"ratio", it.ratio}});
  conv["r0"] = sol.log.r0;
  conv["C0"] = sol.log.C0;
  conv["certificate_rhs"] = sol.log.certificate_rhs;
  write_text(out / "convergence.json", conv.dump(2) + "\n");

  const RadialMesh& mesh = *sol.profile.mesh;
  std::vector<double> absw(mesh.size());
  for (int j = 0; j < mesh.size(); ++j) absw[j] = std::abs(sol.profile.w[j]);
  SvgPlot plot("correction vs model profile", true, true);
  plot.add_series("|w|", mesh.r, absw);
  plot.add_series("h", mesh.r, mesh.h);
  plot.write((out / "profile.svg").string());

  RunResult rr;
  const double residual = ode_residual(sol.profile);
  double worst_ratio = 0.0;
  for (const auto& it : sol.log.iterations)
    if (it.index >= 2) worst_ratio = std::max(worst_ratio, it.ratio);
  rr.summary["results"] = {{"m", prm.m},
                           {"delta", prm.delta},
                           {"r0", sol.log.r0},
                           {"iterations", sol.log.iterations.size()},
                           {"worst_contraction_ratio", worst_ratio},
                           {"C0", sol.log.C0},
                           {"certificate_rhs", sol.log.certificate_rhs},
                           {"ode_residual", residual}};
  const double cap = cfg.get_double("residual.cap", 1e-6);
  const bool ok = sol.log.certified && residual <= cap;
  rr.summary["checks"]["contraction_certified"] =
      sol.log.certified ? "pass" : "fail";
  rr.summary["checks"]["ode_residual"] = residual <= cap ? "pass" : "fail";
  rr.checks_passed &= ok;
  return rr;
}

inline RunResult run_holder(const RunConfig& cfg,
                            const std::filesystem::path& out) {
  const std::string source = cfg.get_string("source", "ode");
  const int n = cfg.get_int("n", 2);
  const double p = cfg.get_double("p", 0.5);
  std::vector<double> r, vr;
  double expected;
  if (source == "ode") {
    const OdeParams prm(n, p);
    SolveOptions opt;
    opt.mesh_size = cfg.get_int("mesh.size", opt.mesh_size);
    const SolveResult sol = solve_profile(prm, cfg.get_double("r0", 0.25), opt);
    profile_derivative_samples(sol.profile, cfg.get_double("frac", 0.1), r, vr);
    expected = 1.0 / prm.m;
  } else if (source == "example") {
    const ChouWangExample ex = chou_wang_example(n, p);
    for (int i = 0; i < 160; ++i) {
      const double x = std::pow(10.0, -4.0 + 3.0 * i / 159.0);
      r.push_back(x);
      vr.push_back(ex.v_bar_r(x));
    }
    expected = ex.graph_exponent - 1.0;
  } else {
    throw ConfigError("holder source must be 'ode' or 'example'");
  }

  const HolderEstimate est =
      holder_exponent(r, vr, cfg.get_double("snap.tol", 0.05));
  write_text(out / "holder.json", holder_json(est).dump(2) + "\n");
  SvgPlot plot("derivative growth", true, true);
  plot.add_series("v_r", r, vr);
  std::vector<double> fit_y(r.size());
  for (size_t i = 0; i < r.size(); ++i)
    fit_y[i] = std::exp(est.slope * std::log(r[i]) +
                        std::log(vr.back()) - est.slope * std::log(r.back()));
  plot.add_series("fit", r, fit_y);
  plot.write((out / "holder.svg").string());

  RunResult rr;
  rr.summary["results"] = holder_json(est);
  rr.summary["results"]["expected_slope"] =
      cfg.get_double("expected.slope", expected);
  const double tol = cfg.get_double("slope.tol", 0.03);
  const bool ok =
      std::abs(est.slope - cfg.get_double("expected.slope", expected)) <= tol;
  rr.summary["checks"]["slope"] = ok ? "pass" : "fail";
  rr.checks_passed &= ok;
  return rr;
}

inline RunResult run_measure(const RunConfig& cfg,
                             const std::filesystem::path& out) {
  const int n = cfg.get_int("n", 1);
  const double p = cfg.get_double("p", 1.0);
  const GridSpec grid = grid_from_config(cfg, n);
  const std::string body_spec = cfg.get_string("body", "ball:1");
  const SupportFunction u = body_from_spec(grid, body_spec);
  const LpMeasure m = lp_measure(u, p);

  std::string csv = "angle,weight\n";
  char buf[80];
  for (int j = 0; j < grid.node_count(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid.angle(j),
                  m.weights[j]);
    csv += buf;
  }
  write_text(out / "measure.csv", csv);

  RunResult rr;
  rr.summary["results"] = {{"total_mass", m.total()}, {"p", p}};
  if (body_spec.rfind("ball:", 0) == 0) {
    const double R = std::stod(body_spec.substr(5));
    const double expect =
        std::pow(R, n + 1.0 - p) * grid.sphere_area();
    rr.summary["results"]["closed_form_mass"] = expect;
    const bool ok = std::abs(m.total() - expect) <= 1e-3 * expect;
    rr.summary["checks"]["ball_mass"] = ok ? "pass" : "fail";
    rr.checks_passed &= ok;
  }
  if (cfg.has("f")) {
    const auto rep = check_generalized_solution(
        u, AnisotropyField::from_spec(cfg.get_string("f", "const:1")), p,
        band_partition(grid, cfg.get_int("partition.width", 1)));
    rr.summary["results"]["max_cell_residual"] = rep.max_abs;
  }
  return rr;
}

inline RunResult dispatch(const RunConfig& cfg,
                          const std::filesystem::path& out);

inline RunResult run_sweep(const RunConfig& cfg,
                           const std::filesystem::path& out) {
  const std::string source = cfg.get_string("source", "");
  if (source.empty() || source == "sweep")
    throw ConfigError("sweep needs source=<subcommand>");

  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& [k, v] : cfg.entries())
    if (k.rfind("sweep.", 0) == 0) axes.push_back({k.substr(6), cfg.get_list(k)});
  if (axes.empty()) throw ConfigError("sweep declares no sweep.<key> axes");

  // cartesian product, sorted by construction (axes map-ordered)
  struct Cell {
    std::string name;
    std::map<std::string, std::string> kv;
  };
  std::vector<Cell> cells{{std::string(), {}}};
  for (const auto& [key, values] : axes) {
    std::vector<Cell> next;
    for (const auto& c : cells)
      for (double v : values) {
        Cell nc = c;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", v);
        nc.kv[key] = buf;
        nc.name += (nc.name.empty() ? "" : "_") + key + "=" + buf;
        next.push_back(std::move(nc));
      }
    cells = std::move(next);
  }

  struct CellOutcome {
    std::string name;
    int exit_code = kExitOk;
    std::string status;
    Json summary;
  };
  std::vector<CellOutcome> outcomes(cells.size());

  int workers = cfg.get_int("workers",
                            static_cast<int>(std::thread::hardware_concurrency()));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= cells.size()) return;
      CellOutcome& oc = outcomes[i];
      oc.name = cells[i].name;
      const std::filesystem::path cell_out = out / ("cell_" + cells[i].name);
      std::filesystem::create_directories(cell_out);
      try {
        std::map<std::string, std::string> kv;
        for (const auto& [k, v] : cfg.entries())
          if (k.rfind("sweep.", 0) != 0 && k != "source" && k != "workers" &&
              k != "out")
            kv[k] = v;
        for (const auto& [k, v] : cells[i].kv) kv[k] = v;
        const RunConfig cell_cfg(source, kv);
        const RunResult rr = dispatch(cell_cfg, cell_out);
        oc.summary = rr.summary;
        oc.exit_code = rr.checks_passed ? kExitOk : kExitCheckFailed;
        oc.status = rr.checks_passed ? "pass" : "check_failed";
        Json s;
        s["version"] = kVersion;
        s["subcommand"] = source;
        s["config"] = kv;
        for (auto& [k, v] : rr.summary.items()) s[k] = v;
        write_text(cell_out / "summary.json", s.dump(2) + "\n");
      } catch (const ConfigError& e) {
        oc.exit_code = kExitConfigError;
        oc.status = std::string("error: ") + e.what();
      } catch (const std::exception& e) {
        oc.exit_code = kExitPipelineError;
        oc.status = std::string("error: ") + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::string table = "cell,exit,status,scalar,value\n";
  RunResult rr;
  rr.summary["results"]["cells"] = Json::array();
  for (const auto& oc : outcomes) {
    // pull one representative scalar if present
    std::string scalar = "";
    double value = std::nan("");
    if (oc.summary.contains("results")) {
      const Json& r = oc.summary["results"];
      for (const char* key : {"slope", "ode_residual",
                              "max_relative_deviation", "extinction_time",
                              "total_mass"})
        if (r.contains(key) && r[key].is_number()) {
          scalar = key;
          value = r[key].get<double>();
          break;
        }
    }
    std::string status = oc.status.substr(0, 40);
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%s,%.17g\n", oc.name.c_str(),
                  oc.exit_code, status.c_str(), scalar.c_str(), value);
    table += buf;
    rr.summary["results"]["cells"].push_back(
        {{"cell", oc.name}, {"exit", oc.exit_code}, {"status", oc.status}});
    rr.checks_passed &= oc.exit_code == kExitOk;
  }
  write_text(out / "table.csv", table);
  return rr;
}

inline RunResult dispatch(const RunConfig& cfg,
                          const std::filesystem::path& out) {
  const std::string& sub = cfg.subcommand();
  if (sub == "flow") return run_flow(cfg, out);
  if (sub == "soliton") return run_soliton(cfg, out);
  if (sub == "bounds") return run_bounds(cfg, out);
  if (sub == "ode") return run_ode(cfg, out);
  if (sub == "holder") return run_holder(cfg, out);
  if (sub == "measure") return run_measure(cfg, out);
  if (sub == "sweep") return run_sweep(cfg, out);
  throw ConfigError("unknown subcommand: " + sub);
}

}  // namespace detail

/// Runs one configuration: creates the output directory, dispatches the
/// subcommand, writes summary.json (config echo, version, verdicts), and
/// maps failures to the documented exit codes.
inline int run(const RunConfig& cfg, std::string* summary_path = nullptr) {
  try {
    const std::filesystem::path out = cfg.get_string("out", "gcf_out");
    std::filesystem::create_directories(out);
    const detail::RunResult rr = detail::dispatch(cfg, out);
    Json summary;
    summary["version"] = kVersion;
    summary["subcommand"] = cfg.subcommand();
    summary["config"] = cfg.entries();
    for (auto& [k, v] : rr.summary.items()) summary[k] = v;
    detail::write_text(out / "summary.json", summary.dump(2) + "\n");
    if (summary_path) *summary_path = (out / "summary.json").string();
    return rr.checks_passed ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pipeline error: %s\n", e.what());
    return kExitPipelineError;
  }
}

}  // namespace gcf
