#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

enum class GridKind { circle, axisymmetric };

inline std::string to_string(GridKind k) {
  return k == GridKind::circle ? "circle" : "axisymmetric";
}

/// Angular grid on the unit sphere of normal directions.
///
/// circle:        theta_j = j * (2*pi/N), j = 0..N-1, periodic. N must be
///                even so every node has an antipodal node.
/// axisymmetric:  phi_j = j * (pi/(N-1)), j = 0..N-1, covering [0, pi]
///                inclusive. N must be odd so the equator is a node; the
///                body is a surface of revolution about the third axis.
class GridSpec {
 public:
  GridSpec(GridKind kind, int node_count) : kind_(kind), n_(node_count) {
    if (kind_ == GridKind::circle) {
      if (n_ < 16) throw ConfigError("circle grid needs node_count >= 16");
      if (n_ % 2 != 0) throw ConfigError("circle grid needs even node_count");
      spacing_ = 2.0 * std::numbers::pi / n_;
    } else {
      if (n_ < 17) throw ConfigError("axisymmetric grid needs node_count >= 17");
      if (n_ % 2 == 0) throw ConfigError("axisymmetric grid needs odd node_count");
      spacing_ = std::numbers::pi / (n_ - 1);
    }
  }

  GridKind kind() const { return kind_; }
  int node_count() const { return n_; }
  double spacing() const { return spacing_; }

  /// Hypersurface dimension: plane curves for the circle, surfaces of
  /// revolution for the axisymmetric grid.
  int dim() const { return kind_ == GridKind::circle ? 1 : 2; }

  /// Grid angle of node j (theta on the circle, polar angle phi otherwise).
  double angle(int j) const { return spacing_ * j; }

  /// Unit normal direction of node j embedded in R^3 (circle uses x,y).
  Vec3 direction(int j) const {
    const double a = angle(j);
    if (kind_ == GridKind::circle) return {std::cos(a), std::sin(a), 0.0};
    return {std::sin(a), 0.0, std::cos(a)};
  }

  /// Index of the antipodal node. Exact for even circle grids; on the
  /// axisymmetric grid the antipode of phi lives at pi - phi (the azimuth
  /// flip is invisible to rotationally symmetric data).
  int antipode(int j) const {
    if (kind_ == GridKind::circle) return (j + n_ / 2) % n_;
    return n_ - 1 - j;
  }

  /// Area of the node-centered cell on S^n (arc length on the circle,
  /// latitude band area on the sphere). Cells partition the sphere:
  /// the band sum telescopes to 4*pi and the arcs to 2*pi.
  double cell_area(int j) const {
    if (kind_ == GridKind::circle) return spacing_;
    const double lo = (j == 0) ? 0.0 : angle(j) - 0.5 * spacing_;
    const double hi = (j == n_ - 1) ? std::numbers::pi : angle(j) + 0.5 * spacing_;
    return 2.0 * std::numbers::pi * (std::cos(lo) - std::cos(hi));
  }

  double sphere_area() const {
    return kind_ == GridKind::circle ? 2.0 * std::numbers::pi
                                     : 4.0 * std::numbers::pi;
  }

  bool operator==(const GridSpec& o) const {
    return kind_ == o.kind_ && n_ == o.n_;
  }

 private:
  GridKind kind_;
  int n_;
  double spacing_;
};

}  // namespace gcf
