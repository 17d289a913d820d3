#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gcf/anisotropy.hpp"
#include "gcf/curvature.hpp"
#include "gcf/errors.hpp"
#include "gcf/support_function.hpp"

namespace gcf {

/// Parameters of the anisotropic speed f(nu) K^alpha. The exponent pins
/// down the companion Minkowski exponent p = 1 - 1/alpha.
struct FlowParams {
  int n = 1;  // hypersurface dimension (1 or 2)
  double alpha = 1.0;
  AnisotropyField f = AnisotropyField::constant(1.0);

  FlowParams(int n_, double alpha_, AnisotropyField f_)
      : n(n_), alpha(alpha_), f(std::move(f_)) {
    if (n != 1 && n != 2) throw ConfigError("flow supports n = 1 or 2 only");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  }

  double p() const { return 1.0 - 1.0 / alpha; }

  /// True in the curvature-bound regime alpha <= 1/(n-1), n >= 2.
  bool bound_regime() const { return n >= 2 && alpha <= 1.0 / (n - 1); }
};

struct StepControl {
  double safety = 0.05;  // CFL fraction: dt * max F <= safety * inradius
  double max_dt = std::numeric_limits<double>::infinity();
  double min_radius_stop = 1e-3;
  double t_end = 1.0;
  int snapshot_count = 200;  // uniformly spaced in [0, t_end]

  void validate() const {
    if (!(safety > 0.0 && safety < 1.0))
      throw ConfigError("safety must lie in (0,1)");
    if (!(min_radius_stop > 0.0))
      throw ConfigError("min_radius_stop must be positive");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (snapshot_count < 2) throw ConfigError("need at least 2 snapshots");
  }
};

struct Diagnostics {
  double lambda_max = 0.0;
  double gauss_max = 0.0;
  double inradius = 0.0;
  double diameter = 0.0;
  double speed_max = 0.0;
};

struct Snapshot {
  double t = 0.0;
  SupportFunction u;
  Diagnostics diag;
};

enum class StopReason { time_reached, radius_floor };

/// Time series of the flow: snapshots at uniform cadence plus scalar
/// diagnostics. Times increase strictly and diameters never increase.
struct FlowTrajectory {
  std::vector<Snapshot> snapshots;
  StopReason stop = StopReason::time_reached;
  long step_count = 0;

  double end_time() const { return snapshots.back().t; }

  std::vector<double> times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
  }
};

/// F = f(nu) K^alpha per node, from precomputed curvature.
inline std::vector<double> flow_speed(const SupportFunction& u,
                                      const CurvatureData& c,
                                      const FlowParams& params) {
  const GridSpec& g = u.grid();
  std::vector<double> F(g.node_count());
  for (int j = 0; j < g.node_count(); ++j)
    F[j] = params.f.value(g.angle(j)) * std::pow(c.gauss[j], params.alpha);
  return F;
}

inline std::vector<double> flow_speed(const SupportFunction& u,
                                      const FlowParams& params) {
  return flow_speed(u, curvature(u), params);
}

/// Stability ceiling of the explicit scheme. Linearizing u_t = -f K^alpha
/// in the support gauge gives a diffusion with coefficient
/// alpha F / r_i per principal direction, and the stiffest grid mode has
/// eigenvalue ~ -4/h^2, so dt must stay below h^2 / (2 max_j alpha F_j
/// sum_i 1/r_ij). The speed-based CFL alone does not control this.
inline double parabolic_dt_bound(const SupportFunction& u,
                                 const CurvatureData& c,
                                 const std::vector<double>& F, double alpha) {
  const double h = u.grid().spacing();
  double stiff = 0.0;
  for (size_t j = 0; j < F.size(); ++j) {
    double tr = 1.0 / c.r1[j];
    if (!c.r2.empty()) tr += 1.0 / c.r2[j];
    stiff = std::max(stiff, alpha * F[j] * tr);
  }
  return h * h / (2.0 * stiff);
}

/// One explicit midpoint step of du/dt = -F(u). Throws StepRejectedError
/// when either the midpoint or the result fails strict convexity; the
/// caller halves dt and retries. The CFL bound dt * max F <= safety *
/// inradius is the caller's responsibility.
inline SupportFunction step(const SupportFunction& u, const FlowParams& params,
                            double dt) {
  const GridSpec& g = u.grid();
  // NonConvexError from the input itself passes through untranslated;
  // halving dt cannot fix a bad starting body.
  const std::vector<double> F = flow_speed(u, params);
  std::vector<double> mid(u.values());
  for (int j = 0; j < g.node_count(); ++j) mid[j] -= 0.5 * dt * F[j];
  SupportFunction u_mid(g, std::move(mid), u.center_offset());

  std::vector<double> F_mid;
  try {
    F_mid = flow_speed(u_mid, params);
  } catch (const Error& e) {
    throw StepRejectedError(std::string("midpoint rejected: ") + e.what());
  }
  std::vector<double> next(u.values());
  for (int j = 0; j < g.node_count(); ++j) next[j] -= dt * F_mid[j];
  SupportFunction out(g, std::move(next), u.center_offset());
  try {
    validate_convexity(out);
  } catch (const Error& e) {
    throw StepRejectedError(std::string("step rejected: ") + e.what());
  }
  return out;
}

/// Extinction time of the comparison ball rho' = -(max f) rho^{-n alpha}:
/// rho0^{n alpha + 1} / ((n alpha + 1) max f). Any flow starting inside
/// the ball is gone by then.
inline double barrier_time(const FlowParams& params, double rho0) {
  if (!(rho0 > 0.0)) throw ConfigError("barrier radius must be positive");
  const double e = params.n * params.alpha + 1.0;
  return std::pow(rho0, e) / (e * params.f.max_sampled());
}

namespace detail {

inline Diagnostics collect_diagnostics(const SupportFunction& u,
                                       const FlowParams& params) {
  Diagnostics d;
  const CurvatureData c = curvature(u);
  d.lambda_max = c.max_lambda();
  d.gauss_max = c.max_gauss();
  d.inradius = inradius(u);
  d.diameter = diameter(u);
  const GridSpec& g = u.grid();
  for (int j = 0; j < g.node_count(); ++j)
    d.speed_max = std::max(
        d.speed_max,
        params.f.value(g.angle(j)) * std::pow(c.gauss[j], params.alpha));
  return d;
}

}  // namespace detail

/// Integrate until the inradius drops below control.min_radius_stop or
/// t reaches control.t_end. dt follows the CFL bound, halves on rejected
/// steps, recovers by the safety factor on success, and is clamped to land
/// exactly on the uniform snapshot times.
inline FlowTrajectory evolve(const SupportFunction& u0,
                             const FlowParams& params,
                             const StepControl& control) {
  control.validate();
  if ((params.n == 1) != (u0.grid().kind() == GridKind::circle))
    throw ConfigError("params.n does not match the grid kind");

  FlowTrajectory traj;
  SupportFunction u = u0;
  double t = 0.0;
  traj.snapshots.push_back({t, u, detail::collect_diagnostics(u, params)});

  // Warm-started Chebyshev center: any center gives a valid inscribed
  // radius, which is all the CFL bound needs.
  Vec3 center{0, 0, 0};
  double center_ref = traj.snapshots.back().diag.inradius;
  auto cfl_radius = [&]() {
    double r = detail::inscribed_radius_at(u, center);
    if (r < 0.5 * center_ref) {  // center went stale
      auto [rr, cc] = chebyshev_center(u, 1e-8, &center);
      r = rr;
      center = cc;
      center_ref = rr;
    }
    return std::max(r, 0.0);
  };

  double dt_scale = 1.0;
  int snap_next = 1;
  const double snap_dt = control.t_end / (control.snapshot_count - 1);

  while (t < control.t_end) {
    const CurvatureData curv = curvature(u);
    const std::vector<double> F = flow_speed(u, curv, params);
    const double f_max = *std::max_element(F.begin(), F.end());
    const double inr = cfl_radius();
    if (inr <= control.min_radius_stop) {
      traj.stop = StopReason::radius_floor;
      break;
    }
    const double dt_base =
        std::min({control.safety * inr / f_max,
                  0.8 * parabolic_dt_bound(u, curv, F, params.alpha),
                  control.max_dt});
    double dt = dt_base * dt_scale;
    const double t_snap = snap_next * snap_dt;
    bool lands_on_snap = false;
    if (t + dt >= t_snap - 1e-15 * control.t_end) {
      dt = std::max(t_snap - t, 0.0);
      lands_on_snap = true;
    }

    try {
      u = step(u, params, dt);
    } catch (const StepRejectedError&) {
      dt_scale *= 0.5;
      if (dt_scale * dt_base < 1e-14 * control.t_end)
        throw StalledError("dt underflow at t = " + std::to_string(t));
      continue;
    }
    dt_scale = std::min(1.0, dt_scale * (1.0 + control.safety));
    t += dt;
    ++traj.step_count;

    if (lands_on_snap) {
      Diagnostics d = detail::collect_diagnostics(u, params);
      if (!(t > traj.snapshots.back().t))
        throw PipelineError("snapshot times must increase");
      if (d.diameter > traj.snapshots.back().diag.diameter *
                           (1.0 + 1e-12))
        throw PipelineError("diameter increased along the flow");
      traj.snapshots.push_back({t, u, d});
      ++snap_next;
      if (d.inradius <= control.min_radius_stop) {
        traj.stop = StopReason::radius_floor;
        break;
      }
    }
  }
  return traj;
}

/// Diagnostics CSV: `t,lambda_max,K_max,inradius,diameter,F_max`.
inline std::string trajectory_csv(const FlowTrajectory& traj) {
  std::string out = "t,lambda_max,K_max,inradius,diameter,F_max\n";
  char buf[160];
  for (const auto& s : traj.snapshots) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.t, s.diag.lambda_max, s.diag.gauss_max, s.diag.inradius,
                  s.diag.diameter, s.diag.speed_max);
    out += buf;
  }
  return out;
}

}  // namespace gcf
