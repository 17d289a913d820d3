#pragma once

#include <cmath>
#include <vector>

#include "gcf/anisotropy.hpp"
#include "gcf/curvature.hpp"
#include "gcf/errors.hpp"
#include "gcf/flow.hpp"

namespace gcf {

/// Manufactures the density f = det(u_ij + u delta_ij) * u^{1-p} node-wise,
/// which makes u0 a generalized solution of the measure identity for that
/// p by construction. The returned field tabulates f with cubic
/// interpolation, so the flow (which samples at nodes) sees it exactly.
inline AnisotropyField make_soliton_field(const SupportFunction& u0,
                                          double p) {
  if (u0.min_value() <= 1e-8 * diameter(u0))
    throw OriginOnBoundaryError("soliton density needs the origin interior");
  const CurvatureData c = curvature(u0);
  const std::vector<double> det = radius_determinant(c);
  std::vector<double> f(u0.node_count());
  for (int j = 0; j < u0.node_count(); ++j)
    f[j] = det[j] * std::pow(u0.at(j), 1.0 - p);
  return AnisotropyField::tabulated(u0.grid(), f);
}

struct SolitonCheckResult {
  double max_relative_deviation = 0.0;  // node-wise, scaled by the diameter
  double t_end = 0.0;
  std::vector<double> times;
  std::vector<double> deviations;  // per snapshot
  FlowTrajectory trajectory;
};

/// Evolves u0 under the speed f^alpha K^alpha with the manufactured f and
/// alpha = 1/(1-p), and compares each snapshot with the homothety
/// a(t) u0, a(t) = (1 - (n alpha + 1) t)^{1/(n alpha + 1)}.
inline SolitonCheckResult soliton_selfsimilarity_check(
    const SupportFunction& u0, double p, StepControl control) {
  if (!(p < 1.0)) throw ConfigError("self-similar speed needs p < 1");
  const double alpha = 1.0 / (1.0 - p);
  const int n = u0.grid().dim();
  const double life = 1.0 / (n * alpha + 1.0);
  control.t_end = std::min(control.t_end, 0.5 * life);

  const AnisotropyField f = make_soliton_field(u0, p);
  FlowParams params(n, alpha, f.pow(alpha));

  SolitonCheckResult res;
  res.trajectory = evolve(u0, params, control);
  res.t_end = res.trajectory.end_time();
  for (const auto& s : res.trajectory.snapshots) {
    const double a = std::pow(1.0 - (n * alpha + 1.0) * s.t, life);
    double dev = 0.0;
    for (int j = 0; j < u0.node_count(); ++j)
      dev = std::max(dev, std::abs(s.u.at(j) - a * u0.at(j)));
    res.times.push_back(s.t);
    res.deviations.push_back(dev / s.diag.diameter);
    res.max_relative_deviation =
        std::max(res.max_relative_deviation, dev / s.diag.diameter);
  }
  return res;
}

}  // namespace gcf
