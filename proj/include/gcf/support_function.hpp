#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/grid.hpp"

namespace gcf {

/// Discretized support function of a convex body.
///
/// `values` holds the rotationally symmetric (or planar) part; an optional
/// center offset c contributes <c, z> analytically, so translated bodies are
/// represented exactly. For axisymmetric grids only the axis component of
/// the offset is meaningful.
class SupportFunction {
 public:
  SupportFunction(GridSpec grid, std::vector<double> values,
                  Vec3 center_offset = {0.0, 0.0, 0.0})
      : grid_(grid), values_(std::move(values)), offset_(center_offset) {
    if (static_cast<int>(values_.size()) != grid_.node_count())
      throw ConfigError("support function values do not match grid size");
    if (grid_.kind() == GridKind::axisymmetric &&
        (offset_[0] != 0.0 || offset_[1] != 0.0))
      throw ConfigError("axisymmetric bodies only support axis offsets");
  }

  static SupportFunction ball(GridSpec grid, double radius,
                              Vec3 center = {0.0, 0.0, 0.0}) {
    return SupportFunction(grid,
                           std::vector<double>(grid.node_count(), radius),
                           center);
  }

  /// u(theta) = sqrt(a^2 cos^2 + b^2 sin^2): an origin-centered ellipse
  /// (circle grid) or spheroid with equatorial semi-axis a and polar
  /// semi-axis b (axisymmetric grid, angle measured from the pole).
  static SupportFunction ellipse(GridSpec grid, double a, double b) {
    std::vector<double> v(grid.node_count());
    for (int j = 0; j < grid.node_count(); ++j) {
      const double ang = grid.angle(j);
      const double s = std::sin(ang), c = std::cos(ang);
      v[j] = grid.kind() == GridKind::circle
                 ? std::sqrt(a * a * c * c + b * b * s * s)
                 : std::sqrt(a * a * s * s + b * b * c * c);
    }
    return SupportFunction(grid, std::move(v));
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  const Vec3& center_offset() const { return offset_; }

  int node_count() const { return grid_.node_count(); }

  /// Support value at node j including the offset contribution.
  double at(int j) const {
    return values_[j] + dot(offset_, grid_.direction(j));
  }

  std::vector<double> total_values() const {
    std::vector<double> out(values_.size());
    for (int j = 0; j < grid_.node_count(); ++j) out[j] = at(j);
    return out;
  }

  double min_value() const {
    double m = at(0);
    for (int j = 1; j < grid_.node_count(); ++j) m = std::min(m, at(j));
    return m;
  }

  double max_value() const {
    double m = at(0);
    for (int j = 1; j < grid_.node_count(); ++j) m = std::max(m, at(j));
    return m;
  }

  SupportFunction scaled(double s) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= s;
    return SupportFunction(grid_, std::move(v),
                           {offset_[0] * s, offset_[1] * s, offset_[2] * s});
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
  Vec3 offset_;
};

/// Max width over antipodal node pairs. The offset terms cancel in the
/// antipodal sum, so translation invariance is exact.
inline double diameter(const SupportFunction& u) {
  const GridSpec& g = u.grid();
  double best = 0.0;
  for (int j = 0; j < g.node_count(); ++j)
    best = std::max(best, u.values()[j] + u.values()[g.antipode(j)]);
  return best;
}

/// Boundary points x = u z + grad u. Circle grids return (x, y, 0); the
/// axisymmetric grid returns meridian points (rho, 0, z) whose rotation
/// sweeps the surface. Tangential derivatives use central differences
/// (symmetric extension at the poles).
inline std::vector<Vec3> body_points(const SupportFunction& u) {
  const GridSpec& g = u.grid();
  const int n = g.node_count();
  const double h = g.spacing();
  const std::vector<double> tot = u.total_values();
  std::vector<Vec3> pts(n);
  if (g.kind() == GridKind::circle) {
    for (int j = 0; j < n; ++j) {
      const double du = (tot[(j + 1) % n] - tot[(j - 1 + n) % n]) / (2.0 * h);
      const double c = std::cos(g.angle(j)), s = std::sin(g.angle(j));
      pts[j] = {tot[j] * c - du * s, tot[j] * s + du * c, 0.0};
    }
  } else {
    for (int j = 0; j < n; ++j) {
      double du;
      if (j == 0 || j == n - 1)
        du = 0.0;  // pole regularity
      else
        du = (tot[j + 1] - tot[j - 1]) / (2.0 * h);
      const double c = std::cos(g.angle(j)), s = std::sin(g.angle(j));
      pts[j] = {tot[j] * s + du * c, 0.0, tot[j] * c - du * s};
    }
  }
  return pts;
}

namespace detail {

/// min_j (u_j - <c, z_j>): radius of the largest ball centered at c inside
/// the body. A lower bound for the inradius at any c.
inline double inscribed_radius_at(const SupportFunction& u, const Vec3& c) {
  const GridSpec& g = u.grid();
  double m = std::numeric_limits<double>::max();
  for (int j = 0; j < g.node_count(); ++j)
    m = std::min(m, u.at(j) - dot(c, g.direction(j)));
  return m;
}

inline double ternary_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  while (hi - lo > tol) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      lo = m1;
    else
      hi = m2;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Chebyshev-center coordinate search for the inradius. Starts from the
/// mean of the reconstructed boundary points (or a caller-provided warm
/// start) and alternates concave 1-d line searches until the center moves
/// less than `tol`. Returns {inradius, center}.
inline std::pair<double, Vec3> chebyshev_center(
    const SupportFunction& u, double tol = 1e-8,
    const Vec3* warm_start = nullptr) {
  const GridSpec& g = u.grid();
  Vec3 c = {0, 0, 0};
  if (warm_start) {
    c = *warm_start;
  } else {
    for (const Vec3& p : body_points(u)) {
      c[0] += p[0];
      c[1] += p[1];
      c[2] += p[2];
    }
    for (double& x : c) x /= g.node_count();
  }

  const double span = u.max_value();
  // Direction set: axis coordinate only for axisymmetric bodies, rotating
  // planar directions for the circle (plain coordinate descent can stall on
  // the piecewise-linear objective).
  std::vector<Vec3> dirs;
  if (g.kind() == GridKind::axisymmetric) {
    c[0] = c[1] = 0.0;
    dirs = {{0, 0, 1}};
  } else {
    c[2] = 0.0;
    const double r = std::numbers::sqrt2 / 2.0;
    dirs = {{1, 0, 0}, {0, 1, 0}, {r, r, 0}, {r, -r, 0}};
  }

  // Bracket shrinks towards the optimum so late passes stay cheap.
  double radius = span;
  for (int pass = 0; pass < 60; ++pass) {
    double moved = 0.0;
    for (const Vec3& d : dirs) {
      auto g1 = [&](double t) {
        return detail::inscribed_radius_at(
            u, {c[0] + t * d[0], c[1] + t * d[1], c[2] + t * d[2]});
      };
      const double t = detail::ternary_max(g1, -radius, radius, tol * 0.25);
      c[0] += t * d[0];
      c[1] += t * d[1];
      c[2] += t * d[2];
      moved = std::max(moved, std::abs(t));
    }
    if (moved < tol) break;
    radius = std::min(radius, std::max(4.0 * moved, 16.0 * tol));
  }
  return {detail::inscribed_radius_at(u, c), c};
}

inline double inradius(const SupportFunction& u, double tol = 1e-8) {
  return chebyshev_center(u, tol).first;
}

// --- CSV serialization ------------------------------------------------

/// Header `kind,node_count,offset_x,offset_y,offset_z`, then one
/// `angle,value` row per node, 17 significant digits.
inline std::string to_csv(const SupportFunction& u) {
  char buf[128];
  std::string out = "kind,node_count,offset_x,offset_y,offset_z\n";
  std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%.17g\n",
                to_string(u.grid().kind()).c_str(), u.grid().node_count(),
                u.center_offset()[0], u.center_offset()[1],
                u.center_offset()[2]);
  out += buf;
  out += "angle,value\n";
  for (int j = 0; j < u.grid().node_count(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid().angle(j),
                  u.values()[j]);
    out += buf;
  }
  return out;
}

inline SupportFunction support_function_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("kind,", 0) != 0)
    throw ConfigError("support function CSV: bad header");
  if (!std::getline(in, line)) throw ConfigError("support function CSV: truncated");
  std::istringstream meta(line);
  std::string kind_s, field;
  std::getline(meta, kind_s, ',');
  std::getline(meta, field, ',');
  const int n = std::stoi(field);
  Vec3 off{};
  for (int k = 0; k < 3; ++k) {
    std::getline(meta, field, ',');
    off[k] = std::stod(field);
  }
  const GridKind kind =
      kind_s == "circle" ? GridKind::circle : GridKind::axisymmetric;
  if (!std::getline(in, line) || line.rfind("angle,", 0) != 0)
    throw ConfigError("support function CSV: bad column header");
  std::vector<double> vals;
  vals.reserve(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    vals.push_back(std::stod(field));
  }
  return SupportFunction(GridSpec(kind, n), std::move(vals), off);
}

inline void save_csv(const SupportFunction& u, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw PipelineError("cannot write " + path);
  f << to_csv(u);
}

inline SupportFunction load_support_function(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  return support_function_from_csv(f);
}

}  // namespace gcf
