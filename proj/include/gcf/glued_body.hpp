#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/minkowski_ode.hpp"

namespace gcf {

/// Spheroid arc closing the body above the graph region: center (0, z_c)
/// on the axis, semi-axes (a, b), joined at parameter tau_join with the
/// graph's value, slope, and meridian curvature. The parallel curvature
/// matches automatically once position and slope do.
struct CapClosure {
  double a = 0.0, b = 0.0, z_center = 0.0;
  double tau_join = 0.0;  // meridian: (a sin tau, z_center - b cos tau)

  double rho(double tau) const { return a * std::sin(tau); }
  double height(double tau) const { return z_center - b * std::cos(tau); }

  /// Angle of the outward normal measured from the downward axis.
  double normal_angle(double tau) const {
    return std::atan2(std::sin(tau) / a, std::cos(tau) / b);
  }

  /// Support value relative to the origin at the flat-disk center.
  double support(double tau) const {
    const double norm = std::hypot(std::sin(tau) / a, std::cos(tau) / b);
    return (1.0 - (z_center / b) * std::cos(tau)) / norm;
  }

  double arclength_density(double tau) const {
    return std::hypot(a * std::cos(tau), b * std::sin(tau));
  }
};

/// Convex body of revolution: unit flat disk at height zero, the radial
/// graph v(x) = vbar(|x| - 1) over the annulus 1 < |x| <= 1 + r0 (kept up
/// to half the graph's final height), and a smooth strictly convex cap.
struct RadialGraphBody {
  int n = 2;
  double flat_radius = 1.0;
  std::shared_ptr<const RadialProfile> profile;
  std::vector<double> v, v_r, v_rr;  // vbar = h + w on the mesh
  int join_index = 0;                // annulus is kept for j <= join_index
  CapClosure cap;

  const RadialMesh& mesh() const { return *profile->mesh; }
};

namespace detail {

inline double sphere_area_nm1(int n) {
  // |S^{n-1}|: 2 pi for n = 2, used as the revolution factor
  const double pi = std::acos(-1.0);
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace detail

inline RadialGraphBody build_glued_body(
    std::shared_ptr<const RadialProfile> profile) {
  const RadialMesh& mesh = *profile->mesh;
  RadialGraphBody body;
  body.n = mesh.params.n;
  body.profile = profile;
  const int J = mesh.size();
  body.v.resize(J);
  body.v_r.resize(J);
  body.v_rr.resize(J);
  for (int j = 0; j < J; ++j) {
    body.v[j] = mesh.h[j] + profile->w[j];
    body.v_r[j] = mesh.h_r[j] + profile->w_r[j];
    body.v_rr[j] = mesh.h_rr[j] + profile->w_rr[j];
    if (std::abs(profile->w[j]) > 0.5 * mesh.h[j] ||
        std::abs(profile->w_r[j]) > 0.5 * mesh.h_r[j] ||
        std::abs(profile->w_rr[j]) > 0.5 * mesh.h_rr[j])
      throw ConvexityLostError(
          "correction exceeds half the model profile at node " +
          std::to_string(j));
  }

  // keep the graph up to half its final height
  const double z_cut = 0.5 * body.v.back();
  int j_star = 0;
  while (j_star + 1 < J && body.v[j_star] < z_cut) ++j_star;
  body.join_index = j_star;

  const double rho = 1.0 + mesh.r[j_star];
  const double z = body.v[j_star];
  const double slope = body.v_r[j_star];
  const double curv = body.v_rr[j_star];
  if (!(slope > 0.0) || !(curv > 0.0) || !(curv * rho > slope))
    throw ConvexityLostError("no convex cap closure at the junction");

  // Solving the three matching equations for (a, b, z_center): with
  // u1 = z - z_center,
  //   slope:      slope = -rho b^2 / (a^2 u1)
  //   curvature:  curv  = slope (u1 - rho slope) / (rho u1)
  //   incidence:  u1^2 / b^2 + rho^2 / a^2 = 1
  const double u1 = rho * slope * slope / (slope - curv * rho);  // < 0
  const double a2 = rho * (rho - u1 / slope);
  const double b2 = -slope * u1 * a2 / rho;
  CapClosure cap;
  cap.a = std::sqrt(a2);
  cap.b = std::sqrt(b2);
  cap.z_center = z - u1;
  cap.tau_join = std::atan2(rho / cap.a, -u1 / cap.b);
  body.cap = cap;
  return body;
}

namespace detail {

/// u^{1-p} dS over the annulus preimage up to radius r_limit; the support
/// value at normal angle atan(v_r) is ((1+r) v_r - v)/sqrt(1+v_r^2) and
/// the area element sqrt(1+v_r^2) (1+r)^{n-1} dr times the revolution
/// factor. The flat side carries u = 0 and contributes nothing for p < 1.
inline double annulus_mass(const RadialGraphBody& body, double p,
                           double r_limit) {
  const RadialMesh& mesh = body.mesh();
  const double wfac = sphere_area_nm1(body.n);
  auto integrand = [&](int j) {
    const double r = mesh.r[j];
    const double s = std::sqrt(1.0 + body.v_r[j] * body.v_r[j]);
    const double u = ((1.0 + r) * body.v_r[j] - body.v[j]) / s;
    return std::pow(u, 1.0 - p) * s * std::pow(1.0 + r, body.n - 1.0);
  };
  double mass = 0.5 * integrand(0) * mesh.r[0];  // u -> 0 towards the rim
  for (int j = 1; j <= body.join_index; ++j) {
    const double r_hi = std::min(mesh.r[j], r_limit);
    if (mesh.r[j - 1] >= r_limit) break;
    const double frac = (r_hi - mesh.r[j - 1]) / (mesh.r[j] - mesh.r[j - 1]);
    const double f_lo = integrand(j - 1);
    const double f_hi = f_lo + frac * (integrand(j) - f_lo);
    mass += 0.5 * (f_lo + f_hi) * (r_hi - mesh.r[j - 1]);
    if (r_hi >= r_limit) break;
  }
  return wfac * mass;
}

inline double cap_mass(const RadialGraphBody& body, double p,
                       int samples = 4096) {
  const CapClosure& cap = body.cap;
  const double pi = std::acos(-1.0);
  const double wfac = sphere_area_nm1(body.n);
  const double dtau = (pi - cap.tau_join) / samples;
  double mass = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double tau = cap.tau_join + dtau * i;
    const double u = cap.support(tau);
    const double f = std::pow(u, 1.0 - p) *
                     std::pow(cap.rho(tau), body.n - 1.0) *
                     cap.arclength_density(tau);
    mass += (i == 0 || i == samples) ? 0.5 * f : f;
  }
  return wfac * mass * dtau;
}

}  // namespace detail

/// Total u^{1-p} dS mass of the glued body (annulus + cap; flat side zero).
inline double total_sp_mass(const RadialGraphBody& body, double p) {
  if (!(p < 1.0)) throw ConfigError("flat-sided bodies need p < 1");
  const double r_join = body.mesh().r[body.join_index];
  return detail::annulus_mass(body, p, r_join) + detail::cap_mass(body, p);
}

/// Mass of the normal-direction cap of half-angle psi around the downward
/// axis. The flat disk is the atom at the axis direction itself and has
/// zero u^{1-p} mass; everything else comes from graph points with slope
/// below tan(psi).
inline double polar_cap_mass(const RadialGraphBody& body, double p,
                             double psi) {
  const double join_angle = std::atan(body.v_r[body.join_index]);
  if (!(psi > 0.0) || psi > join_angle)
    throw ConfigError("cap angle must lie inside the annulus range");
  const double target = std::tan(psi);
  const auto& v_r = body.v_r;
  const RadialMesh& mesh = body.mesh();
  const int hi = static_cast<int>(
      std::lower_bound(v_r.begin(), v_r.begin() + body.join_index + 1,
                       target) - v_r.begin());
  double r_limit;
  if (hi == 0)
    r_limit = mesh.r[0] * target / v_r[0];
  else if (hi > body.join_index)
    r_limit = mesh.r[body.join_index];
  else {
    const double frac = (target - v_r[hi - 1]) / (v_r[hi] - v_r[hi - 1]);
    r_limit = mesh.r[hi - 1] + frac * (mesh.r[hi] - mesh.r[hi - 1]);
  }
  return detail::annulus_mass(body, p, r_limit);
}

struct RecoveredDensity {
  std::vector<double> annulus;  // per mesh node up to the junction
  std::vector<double> cap;      // per cap sample
  double min = 0.0, max = 0.0;
};

/// Density u^{1-p} / K recovered pointwise on the curved boundary. On the
/// annulus the radial construction makes it one up to the equation
/// residual; on the cap it is whatever smooth positive function the
/// closure realizes. Gauss curvature of the revolution graph z(rho):
/// K = z'' (z'/rho)^{n-1} / (1+z'^2)^{(n+2)/2}.
inline RecoveredDensity recovered_density(const RadialGraphBody& body,
                                          double p, int cap_samples = 512) {
  RecoveredDensity out;
  const RadialMesh& mesh = body.mesh();
  for (int j = 0; j <= body.join_index; ++j) {
    const double rho = 1.0 + mesh.r[j];
    const double s2 = 1.0 + body.v_r[j] * body.v_r[j];
    const double u = (rho * body.v_r[j] - body.v[j]) / std::sqrt(s2);
    const double K = body.v_rr[j] *
                     std::pow(body.v_r[j] / rho, body.n - 1.0) /
                     std::pow(s2, 0.5 * (body.n + 2.0));
    out.annulus.push_back(std::pow(u, 1.0 - p) / K);
  }
  const double pi = std::acos(-1.0);
  for (int i = 1; i < cap_samples; ++i) {
    const double tau =
        body.cap.tau_join + (pi - body.cap.tau_join) * i / cap_samples;
    const double a = body.cap.a, b = body.cap.b;
    // principal radii of the spheroid arc at parameter tau
    const double w2 = a * a * std::cos(tau) * std::cos(tau) +
                      b * b * std::sin(tau) * std::sin(tau);
    const double r_meridian = std::pow(w2, 1.5) / (a * b);
    const double r_parallel = a * std::sqrt(w2) / b;
    const double K = 1.0 / (r_meridian * std::pow(r_parallel, body.n - 1.0));
    out.cap.push_back(std::pow(body.cap.support(tau), 1.0 - p) / K);
  }
  out.min = out.annulus[0];
  out.max = out.annulus[0];
  for (const auto* part : {&out.annulus, &out.cap})
    for (double f : *part) {
      out.min = std::min(out.min, f);
      out.max = std::max(out.max, f);
    }
  if (!(out.min > 0.0) || !std::isfinite(out.max))
    throw ConvexityLostError("recovered density is not positive and bounded");
  return out;
}

struct FlatPartReport {
  std::vector<double> cap_angles;
  std::vector<double> masses;
  double total_mass = 0.0;
};

/// Masses of a decreasing sequence of normal caps around the downward
/// axis; for p < 1 they must decay to zero, which is the discrete shadow
/// of the flat side carrying no u^{1-p} dS mass.
inline FlatPartReport flat_part_measure_check(
    const RadialGraphBody& body, double p,
    const std::vector<double>& cap_angles) {
  if (!(p < 1.0)) throw ConfigError("flat-part check needs p < 1");
  FlatPartReport rep;
  rep.cap_angles = cap_angles;
  rep.total_mass = total_sp_mass(body, p);
  double prev = std::numeric_limits<double>::max();
  for (double psi : cap_angles) {
    const double m = polar_cap_mass(body, p, psi);
    if (m > prev)
      throw PipelineError("cap masses must decrease with the angle");
    prev = m;
    rep.masses.push_back(m);
  }
  return rep;
}

/// Meridian CSV `rho,height,normal_angle`: flat disk, annulus, cap.
inline std::string meridian_csv(const RadialGraphBody& body,
                                int flat_samples = 32, int cap_samples = 256) {
  std::string out = "rho,height,normal_angle\n";
  char buf[128];
  for (int i = 0; i < flat_samples; ++i) {
    const double rho = body.flat_radius * i / (flat_samples - 1);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", rho, 0.0, 0.0);
    out += buf;
  }
  const RadialMesh& mesh = body.mesh();
  for (int j = 0; j <= body.join_index; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", 1.0 + mesh.r[j],
                  body.v[j], std::atan(body.v_r[j]));
    out += buf;
  }
  const double pi = std::acos(-1.0);
  for (int i = 1; i <= cap_samples; ++i) {
    const double tau =
        body.cap.tau_join + (pi - body.cap.tau_join) * i / cap_samples;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", body.cap.rho(tau),
                  body.cap.height(tau), body.cap.normal_angle(tau));
    out += buf;
  }
  return out;
}

}  // namespace gcf
