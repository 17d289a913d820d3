#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "gcf/flow.hpp"

namespace gcf {

/// Residuals of the flow's evolution identities, evaluated on snapshot
/// data by central differences in time:
///
///   metric: d/dt g_11 = -2 F h_11
///   speed:  d/dt F    = alpha f K^alpha b^{ij} grad^2 F
///                       + K^alpha <grad f, grad F> + alpha F^2 H
///
/// Time derivatives along the flow track material points, while the
/// snapshots are stored in the Gauss-map parametrization; the conversion
/// adds the tangential drift theta_dot = F_theta / r1 (and, for the metric
/// component, the divergence of the drift). On the circle every term is
/// computable from u alone; axisymmetric trajectories are supported in the
/// round case, where the spatial terms vanish.
struct IdentityReport {
  double metric_residual = 0.0;
  double speed_residual = 0.0;
  // observed order when comparing time strides dt and 2 dt (NaN when the
  // trajectory is too short to form the wider stencil)
  double metric_order = std::numeric_limits<double>::quiet_NaN();
  double speed_order = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct IdentityFrames {
  double dt = 0.0;
  std::vector<std::vector<double>> r1;  // [snapshot][node]
  std::vector<std::vector<double>> F;
};

inline IdentityFrames identity_frames(const FlowTrajectory& traj,
                                      const FlowParams& params) {
  if (traj.snapshots.size() < 3)
    throw InsufficientSnapshotsError("need at least 3 snapshots");
  IdentityFrames fr;
  fr.dt = traj.snapshots[1].t - traj.snapshots[0].t;
  for (size_t k = 1; k + 1 < traj.snapshots.size(); ++k) {
    const double step = traj.snapshots[k + 1].t - traj.snapshots[k].t;
    if (std::abs(step - fr.dt) > 1e-9 * std::max(std::abs(fr.dt), step))
      throw InsufficientSnapshotsError("snapshots are not uniformly spaced");
  }
  for (const auto& s : traj.snapshots) {
    const CurvatureData c = curvature(s.u);
    const GridSpec& g = s.u.grid();
    std::vector<double> F(g.node_count());
    for (int j = 0; j < g.node_count(); ++j)
      F[j] = params.f.value(g.angle(j)) * std::pow(c.gauss[j], params.alpha);
    fr.r1.push_back(c.r1);
    fr.F.push_back(std::move(F));
  }
  return fr;
}

inline double dtheta(const std::vector<double>& v, int j, double h) {
  const int n = static_cast<int>(v.size());
  return (v[(j + 1) % n] - v[(j - 1 + n) % n]) / (2.0 * h);
}

inline double dtheta2(const std::vector<double>& v, int j, double h) {
  const int n = static_cast<int>(v.size());
  return (v[(j + 1) % n] - 2.0 * v[j] + v[(j - 1 + n) % n]) / (h * h);
}

/// Max residuals over interior snapshots at the given time stride.
inline std::pair<double, double> identity_residuals_at_stride(
    const FlowTrajectory& traj, const FlowParams& params,
    const IdentityFrames& fr, int stride) {
  const GridSpec& g = traj.snapshots.front().u.grid();
  const int n = g.node_count();
  const double h = g.spacing();
  const bool circle = g.kind() == GridKind::circle;
  const int K = static_cast<int>(traj.snapshots.size());
  double worst_metric = 0.0, worst_speed = 0.0;

  for (int k = stride; k + stride < K; ++k) {
    const auto& r1 = fr.r1[k];
    const auto& F = fr.F[k];
    const double dt2 = 2.0 * stride * fr.dt;

    if (!circle) {
      // round reduction: assert the snapshot really is round
      for (int j = 1; j < n; ++j)
        if (std::abs(traj.snapshots[k].u.at(j) - traj.snapshots[k].u.at(0)) >
            1e-8 * traj.snapshots[k].u.at(0))
          throw ConfigError(
              "axisymmetric identity checks require round trajectories");
      const double dgdt =
          (fr.r1[k + stride][0] * fr.r1[k + stride][0] -
           fr.r1[k - stride][0] * fr.r1[k - stride][0]) / dt2;
      const double dFdt = (fr.F[k + stride][0] - fr.F[k - stride][0]) / dt2;
      const double H = params.n / r1[0];
      worst_metric = std::max(worst_metric,
                              std::abs(dgdt + 2.0 * F[0] * r1[0]));
      worst_speed = std::max(
          worst_speed, std::abs(dFdt - params.alpha * F[0] * F[0] * H));
      continue;
    }

    std::vector<double> g11(n), drift(n);
    for (int j = 0; j < n; ++j) g11[j] = r1[j] * r1[j];
    for (int j = 0; j < n; ++j) drift[j] = dtheta(F, j, h) / r1[j];

    for (int j = 0; j < n; ++j) {
      const double dgdt = (fr.r1[k + stride][j] * fr.r1[k + stride][j] -
                           fr.r1[k - stride][j] * fr.r1[k - stride][j]) / dt2;
      const double metric = dgdt + drift[j] * dtheta(g11, j, h) +
                            2.0 * g11[j] * dtheta(drift, j, h) +
                            2.0 * F[j] * r1[j];
      worst_metric = std::max(worst_metric, std::abs(metric));

      const double dFdt = (fr.F[k + stride][j] - fr.F[k - stride][j]) / dt2;
      const double Fth = dtheta(F, j, h);
      const double Fthth = dtheta2(F, j, h);
      const double r1th = dtheta(r1, j, h);
      const double Ka = F[j] / params.f.value(g.angle(j));
      const double elliptic =
          params.alpha * F[j] * (Fthth - r1th / r1[j] * Fth) / r1[j];
      const double gradient = Ka * params.f.deriv(g.angle(j)) * Fth / r1[j];
      const double reaction = params.alpha * F[j] * F[j] / r1[j];
      const double speed =
          dFdt + drift[j] * Fth - (elliptic + gradient + reaction);
      worst_speed = std::max(worst_speed, std::abs(speed));
    }
  }
  return {worst_metric, worst_speed};
}

}  // namespace detail

inline IdentityReport verify_evolution_identities(const FlowTrajectory& traj,
                                                  const FlowParams& params) {
  const detail::IdentityFrames fr = detail::identity_frames(traj, params);
  IdentityReport rep;
  auto [m1, s1] = detail::identity_residuals_at_stride(traj, params, fr, 1);
  rep.metric_residual = m1;
  rep.speed_residual = s1;
  if (traj.snapshots.size() >= 5) {
    auto [m2, s2] = detail::identity_residuals_at_stride(traj, params, fr, 2);
    rep.metric_order = std::log2(m2 / m1);
    rep.speed_order = std::log2(s2 / s1);
  }
  return rep;
}

/// Snapshots of the shrinking ball rho(t) = (rho0^{n a + 1} - (n a + 1)
/// f t)^{1/(n a + 1)} sampled from the closed form (constant f), for
/// residual floors free of integration error.
inline FlowTrajectory round_closed_form_trajectory(const GridSpec& grid,
                                                   const FlowParams& params,
                                                   double rho0, double t_lo,
                                                   double t_hi, int count) {
  const double e = params.n * params.alpha + 1.0;
  const double fconst = params.f.value(0.0);
  FlowTrajectory traj;
  for (int k = 0; k < count; ++k) {
    const double t = t_lo + (t_hi - t_lo) * k / (count - 1);
    const double rho = std::pow(std::pow(rho0, e) - e * fconst * t, 1.0 / e);
    Snapshot s{t, SupportFunction::ball(grid, rho), {}};
    s.diag.inradius = rho;
    s.diag.diameter = 2.0 * rho;
    s.diag.gauss_max = std::pow(rho, -params.n);
    s.diag.lambda_max = 1.0 / rho;
    s.diag.speed_max = fconst * std::pow(s.diag.gauss_max, params.alpha);
    traj.snapshots.push_back(std::move(s));
  }
  return traj;
}

}  // namespace gcf
