#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/support_function.hpp"

namespace gcf {

/// Per-node principal radii and curvatures extracted from a support
/// function. For plane curves only r1/lambda1 are populated and K = H =
/// lambda1; for surfaces of revolution r1 is the meridian radius and r2
/// the parallel one.
struct CurvatureData {
  std::vector<double> r1;
  std::vector<double> r2;       // empty for circle grids
  std::vector<double> lambda1;  // 1/r1
  std::vector<double> lambda2;  // 1/r2
  std::vector<double> gauss;    // K = prod lambda_i
  std::vector<double> mean;     // H = sum lambda_i

  double min_radius() const {
    double m = r1[0];
    for (double v : r1) m = std::min(m, v);
    for (double v : r2) m = std::min(m, v);
    return m;
  }
  double max_gauss() const {
    double m = gauss[0];
    for (double v : gauss) m = std::max(m, v);
    return m;
  }
  double max_lambda() const {
    double m = lambda1[0];
    for (double v : lambda1) m = std::max(m, v);
    for (double v : lambda2) m = std::max(m, v);
    return m;
  }
};

/// Degeneracy tolerance: a principal radius at or below this fraction of
/// the diameter counts as a collapsed body rather than roundoff.
inline constexpr double kConvexityTolFactor = 1e-10;

namespace detail {

inline void fill_circle_radii(const std::vector<double>& tot, double h,
                              std::vector<double>& r1) {
  const int n = static_cast<int>(tot.size());
  for (int j = 0; j < n; ++j) {
    const double dd =
        (tot[(j + 1) % n] - 2.0 * tot[j] + tot[(j - 1 + n) % n]) / (h * h);
    r1[j] = dd + tot[j];
  }
}

/// Meridian and parallel radii of a rotationally symmetric body,
/// second-order central differences. Poles use the symmetric-extension
/// stencil (the regularity condition u_phi = 0 supplies the ghost node),
/// where both radii coincide with the umbilic limit u_phiphi + u.
inline void fill_axisym_radii(const std::vector<double>& tot, double h,
                              std::vector<double>& r1,
                              std::vector<double>& r2) {
  const int n = static_cast<int>(tot.size());
  for (int j = 0; j < n; ++j) {
    if (j == 0 || j == n - 1) {
      const int nb = (j == 0) ? 1 : n - 2;
      const double dd = 2.0 * (tot[nb] - tot[j]) / (h * h);
      r1[j] = dd + tot[j];
      r2[j] = r1[j];
    } else {
      const double dd = (tot[j + 1] - 2.0 * tot[j] + tot[j - 1]) / (h * h);
      const double du = (tot[j + 1] - tot[j - 1]) / (2.0 * h);
      const double phi = h * j;
      r1[j] = dd + tot[j];
      r2[j] = du * std::cos(phi) / std::sin(phi) + tot[j];
    }
  }
}

}  // namespace detail

/// Curvature of a convex plane curve: the single principal radius is
/// u_thetatheta + u and K is its reciprocal.
inline CurvatureData curvature_circle(const SupportFunction& u) {
  if (u.grid().kind() != GridKind::circle)
    throw ConfigError("curvature_circle requires a circle grid");
  const int n = u.node_count();
  CurvatureData c;
  c.r1.resize(n);
  detail::fill_circle_radii(u.total_values(), u.grid().spacing(), c.r1);

  const double tol = kConvexityTolFactor * diameter(u);
  c.lambda1.resize(n);
  c.gauss.resize(n);
  c.mean.resize(n);
  for (int j = 0; j < n; ++j) {
    if (c.r1[j] <= tol)
      throw NonConvexError("principal radius " + std::to_string(c.r1[j]) +
                           " at node " + std::to_string(j));
    c.lambda1[j] = 1.0 / c.r1[j];
    c.gauss[j] = c.lambda1[j];
    c.mean[j] = c.lambda1[j];
  }
  return c;
}

/// Curvature of a rotationally symmetric convex surface.
///
/// `pole_tol` bounds the allowed relative mismatch between the pole radius
/// and its quadratic extrapolation from the two neighbors; a smooth body
/// satisfies it with O(spacing^2) to spare, a genuinely singular pole
/// does not.
inline CurvatureData curvature_axisym(const SupportFunction& u,
                                      double pole_tol = 0.08) {
  if (u.grid().kind() != GridKind::axisymmetric)
    throw ConfigError("curvature_axisym requires an axisymmetric grid");
  const int n = u.node_count();
  CurvatureData c;
  c.r1.resize(n);
  c.r2.resize(n);
  detail::fill_axisym_radii(u.total_values(), u.grid().spacing(), c.r1, c.r2);

  for (int pole : {0, n - 1}) {
    const int j1 = (pole == 0) ? 1 : n - 2;
    const int j2 = (pole == 0) ? 2 : n - 3;
    const double extrap = 2.0 * c.r2[j1] - c.r2[j2];
    const double scale = std::abs(c.r2[pole]) + std::abs(extrap);
    if (scale > 0.0 && std::abs(c.r2[pole] - extrap) > pole_tol * scale)
      throw PoleSingularError("pole radius " + std::to_string(c.r2[pole]) +
                              " vs extrapolated " + std::to_string(extrap));
  }

  const double tol = kConvexityTolFactor * diameter(u);
  c.lambda1.resize(n);
  c.lambda2.resize(n);
  c.gauss.resize(n);
  c.mean.resize(n);
  for (int j = 0; j < n; ++j) {
    if (std::min(c.r1[j], c.r2[j]) <= tol)
      throw NonConvexError("principal radius " +
                           std::to_string(std::min(c.r1[j], c.r2[j])) +
                           " at node " + std::to_string(j));
    c.lambda1[j] = 1.0 / c.r1[j];
    c.lambda2[j] = 1.0 / c.r2[j];
    c.gauss[j] = c.lambda1[j] * c.lambda2[j];
    c.mean[j] = c.lambda1[j] + c.lambda2[j];
  }
  return c;
}

inline CurvatureData curvature(const SupportFunction& u) {
  return u.grid().kind() == GridKind::circle ? curvature_circle(u)
                                             : curvature_axisym(u);
}

/// Throws NonConvexError (or PoleSingularError) when u fails strict
/// convexity on the grid.
inline void validate_convexity(const SupportFunction& u) { curvature(u); }

/// det(u_ij + u delta_ij) = 1/K per node.
inline std::vector<double> radius_determinant(const CurvatureData& c) {
  std::vector<double> det(c.r1.size());
  for (size_t j = 0; j < c.r1.size(); ++j)
    det[j] = c.r2.empty() ? c.r1[j] : c.r1[j] * c.r2[j];
  return det;
}

/// V = 1/(n+1) * integral of u dS, node-cell quadrature.
inline double volume(const SupportFunction& u) {
  const CurvatureData c = curvature(u);
  const std::vector<double> det = radius_determinant(c);
  const GridSpec& g = u.grid();
  double v = 0.0;
  for (int j = 0; j < g.node_count(); ++j)
    v += u.at(j) * det[j] * g.cell_area(j);
  return v / (g.dim() + 1);
}

}  // namespace gcf
