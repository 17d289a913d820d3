#pragma once

#include <cmath>
#include <vector>

#include "gcf/bounds.hpp"
#include "gcf/errors.hpp"
#include "gcf/minkowski_ode.hpp"

namespace gcf {

/// Regularity classification from the growth of the radial derivative:
/// v_r ~ r^s near zero puts the rotated graph in C^{k,gamma} with
/// k + gamma = 1 + s.
struct HolderEstimate {
  double slope = 0.0;
  int k = 1;
  double gamma = 1.0;
  double r_lo = 0.0, r_hi = 0.0;
  double rms_residual = 0.0;
  int samples = 0;
};

/// Log-log least squares of derivative samples. Requires at least two
/// decades of radius; fitted slopes snapping to an integer within
/// `snap_tol` are classified at the integer (so a slope of 0.99 reports
/// the bounded-curvature class C^{1,1} rather than C^{1,0.99}).
inline HolderEstimate holder_exponent(const std::vector<double>& r,
                                      const std::vector<double>& v_r,
                                      double snap_tol = 0.05) {
  if (r.size() != v_r.size() || r.size() < 8)
    throw InsufficientDecadesError("need at least 8 derivative samples");
  double lo = r[0], hi = r[0];
  for (double x : r) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(lo > 0.0) || hi / lo < 100.0)
    throw InsufficientDecadesError("samples must span two decades of r");
  for (double v : v_r)
    if (!(v > 0.0))
      throw InsufficientDecadesError("derivative samples must be positive");

  const ExponentFit fit = fit_exponent(r, v_r);
  HolderEstimate est;
  est.slope = fit.slope;
  est.r_lo = lo;
  est.r_hi = hi;
  est.rms_residual = fit.residual;
  est.samples = fit.samples;
  if (!(est.slope > 0.0 && est.slope < 2.0))
    throw PipelineError("derivative growth slope " +
                        std::to_string(est.slope) +
                        " outside the graph regularity range (0, 2)");

  double s = est.slope;
  if (std::abs(s - std::round(s)) <= snap_tol) s = std::round(s);
  const double total = 1.0 + s;
  est.k = static_cast<int>(std::floor(total));
  est.gamma = total - est.k;
  if (est.gamma == 0.0) {
    est.k -= 1;
    est.gamma = 1.0;
  }
  return est;
}

/// Derivative samples of a solved profile on the lower part of its mesh
/// (r <= frac * r0), where the correction is provably lower order.
inline void profile_derivative_samples(const RadialProfile& prof,
                                       double frac, std::vector<double>& r,
                                       std::vector<double>& v_r) {
  const RadialMesh& mesh = *prof.mesh;
  r.clear();
  v_r.clear();
  for (int j = 0; j < mesh.size(); ++j) {
    if (mesh.r[j] > frac * mesh.r0) break;
    r.push_back(mesh.r[j]);
    v_r.push_back(mesh.h_r[j] + prof.w_r[j]);
  }
}

}  // namespace gcf
