#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

/// Closed forms of the rotationally symmetric sharp-regularity body whose
/// support function restricted to the tangent plane at the south pole is
/// |y|^{2 alpha}, alpha = n/(n-p+1). The boundary is the radial graph
/// v(x) = c |x|^{2n/(n+p-1)} and the density near the pole is
/// (2a)^n (2a-1) |z_{n+1}|^{-(n+p+1)}; the exponent follows from the
/// gnomonic Hessian transformation det(grad^2 u + u g) =
/// (1+|y|^2)^{(n+2)/2} det D^2 u~ together with u = u~ |z_{n+1}|.
struct ChouWangExample {
  int n = 2;
  double p = 2.0;
  double alpha = 2.0;
  double c = 0.0;
  double graph_exponent = 0.0;  // 2n/(n+p-1)

  double u_tilde(double y) const { return std::pow(y, 2.0 * alpha); }

  double v_bar(double rho) const { return c * std::pow(rho, graph_exponent); }
  double v_bar_r(double rho) const {
    return c * graph_exponent * std::pow(rho, graph_exponent - 1.0);
  }

  double density(double z_axis_component) const {
    return std::pow(2.0 * alpha, n) * (2.0 * alpha - 1.0) *
           std::pow(std::abs(z_axis_component), -(n + p + 1.0));
  }

  /// Support function of the graph germ by polar angle psi from the pole:
  /// u = tan^{2 alpha}(psi) cos(psi), finite for psi < pi/2.
  double support(double psi) const {
    return std::pow(std::tan(psi), 2.0 * alpha) * std::cos(psi);
  }

  /// | det D^2 u~ - (2a)^n (2a-1) u~^{p-1} | / rhs at radius rho, with the
  /// determinant of the radial Hessian evaluated as g'' (g'/rho)^{n-1}.
  double det_residual(double rho) const {
    const double g1 = 2.0 * alpha * std::pow(rho, 2.0 * alpha - 1.0);
    const double g2 =
        2.0 * alpha * (2.0 * alpha - 1.0) * std::pow(rho, 2.0 * alpha - 2.0);
    const double det = g2 * std::pow(g1 / rho, n - 1.0);
    const double rhs = std::pow(2.0 * alpha, n) * (2.0 * alpha - 1.0) *
                       std::pow(u_tilde(rho), p - 1.0);
    return std::abs(det - rhs) / rhs;
  }

  /// Support identity at the graph point over |x| = rho: the pairing of
  /// (x, v(x)) with (Dv(x), -1) must reproduce u~ at y = Dv(x).
  double legendre_residual(double rho) const {
    const double y = v_bar_r(rho);
    const double pairing = rho * y - v_bar(rho);
    const double expect = u_tilde(y);
    return std::abs(pairing - expect) / std::abs(expect);
  }
};

inline ChouWangExample chou_wang_example(int n, double p) {
  if (!((p > -n + 1.0 && p < 1.0) || (p > 1.0 && p < n + 1.0)))
    throw BadRangeError("need p in (-n+1, 1) or (1, n+1)");
  ChouWangExample ex;
  ex.n = n;
  ex.p = p;
  ex.alpha = n / (n - p + 1.0);
  ex.graph_exponent = 2.0 * n / (n + p - 1.0);
  ex.c = (2.0 * ex.alpha - 1.0) /
         std::pow(2.0 * ex.alpha, 2.0 * ex.alpha / (2.0 * ex.alpha - 1.0));
  return ex;
}

struct CapResidualReport {
  std::vector<double> residuals;  // per interior cell
  double max_abs = 0.0;
  double total_mass = 0.0;
};

/// Measure identity of the example on a polar cap, away from the singular
/// pole: tabulate u on a uniform psi grid over [psi_lo, psi_hi], extract
/// the principal radii by central differences, and compare the cell mass
/// u^{1-p} r1 r2 dsigma with the density integral. Surfaces in R^3 only.
inline CapResidualReport chou_wang_cap_residuals(const ChouWangExample& ex,
                                                 double psi_lo, double psi_hi,
                                                 int nodes) {
  if (ex.n != 2) throw ConfigError("cap residuals implemented for n = 2");
  if (!(psi_lo > 0.0) || !(psi_hi > psi_lo) || psi_hi > 0.79)
    throw ConfigError("cap must sit inside (0, pi/4]");
  if (nodes < 8) throw ConfigError("cap grid too coarse");
  const double h = (psi_hi - psi_lo) / (nodes - 1);
  std::vector<double> u(nodes);
  for (int j = 0; j < nodes; ++j) u[j] = ex.support(psi_lo + h * j);

  CapResidualReport rep;
  const double twopi = 2.0 * std::acos(-1.0);
  for (int j = 1; j + 1 < nodes; ++j) {
    const double psi = psi_lo + h * j;
    const double du = (u[j + 1] - u[j - 1]) / (2.0 * h);
    const double ddu = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    const double r1 = ddu + u[j];
    const double r2 = du * std::cos(psi) / std::sin(psi) + u[j];
    const double area = twopi * (std::cos(psi - 0.5 * h) - std::cos(psi + 0.5 * h));
    const double mass = std::pow(u[j], 1.0 - ex.p) * r1 * r2 * area;
    const double expect = ex.density(std::cos(psi)) * area;
    rep.residuals.push_back(mass - expect);
    rep.max_abs = std::max(rep.max_abs, std::abs(mass - expect));
    rep.total_mass += mass;
  }
  return rep;
}

}  // namespace gcf
