#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/grid.hpp"

namespace gcf {

namespace detail {

/// Cubic spline through (x_j, y_j). Periodic splines close the loop over
/// period `period`; otherwise the ends are clamped with zero slope, which
/// matches the pole regularity of axisymmetric data.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> x, std::vector<double> y, bool periodic,
              double period = 0.0)
      : x_(std::move(x)), y_(std::move(y)), periodic_(periodic),
        period_(period) {
    const int n = static_cast<int>(x_.size());
    m_.assign(n, 0.0);
    // Solve for second derivatives m with a (cyclic) tridiagonal system.
    std::vector<double> a(n), b(n), c(n), d(n);
    auto hseg = [&](int i) { return x_[i + 1] - x_[i]; };
    if (!periodic_) {
      // Clamped, zero end slopes.
      b[0] = 2.0 * hseg(0);
      c[0] = hseg(0);
      d[0] = 6.0 * ((y_[1] - y_[0]) / hseg(0));
      for (int i = 1; i < n - 1; ++i) {
        a[i] = hseg(i - 1);
        b[i] = 2.0 * (hseg(i - 1) + hseg(i));
        c[i] = hseg(i);
        d[i] = 6.0 * ((y_[i + 1] - y_[i]) / hseg(i) -
                      (y_[i] - y_[i - 1]) / hseg(i - 1));
      }
      a[n - 1] = hseg(n - 2);
      b[n - 1] = 2.0 * hseg(n - 2);
      d[n - 1] = 6.0 * (-(y_[n - 1] - y_[n - 2]) / hseg(n - 2));
      solve_tridiag(a, b, c, d, m_);
    } else {
      // Nodes x_0..x_{n-1}, segment n-1 wraps from x_{n-1} to x_0+period.
      const double hl = period_ - (x_[n - 1] - x_[0]);
      std::vector<double> diag(n), upper(n), rhs(n);
      auto seg = [&](int i) { return i == n - 1 ? hl : hseg(i); };
      auto slope = [&](int i) {
        return i == n - 1 ? (y_[0] - y_[n - 1]) / hl
                          : (y_[i + 1] - y_[i]) / hseg(i);
      };
      for (int i = 0; i < n; ++i) {
        const int prev = (i - 1 + n) % n;
        diag[i] = 2.0 * (seg(prev) + seg(i));
        upper[i] = seg(i);
        rhs[i] = 6.0 * (slope(i) - slope(prev));
      }
      solve_cyclic(diag, upper, rhs, m_);
    }
  }

  double eval(double t, int deriv = 0) const {
    const int n = static_cast<int>(x_.size());
    double tt = t;
    if (periodic_) {
      tt = std::fmod(t - x_[0], period_);
      if (tt < 0) tt += period_;
      tt += x_[0];
    }
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), tt) -
                             x_.begin()) - 1;
    double hi;
    double ynext, mnext;
    if (i < 0) i = 0;
    if (periodic_ && i >= n - 1) {
      i = n - 1;
      hi = period_ - (x_[n - 1] - x_[0]);
      ynext = y_[0];
      mnext = m_[0];
    } else {
      if (i > n - 2) i = n - 2;
      hi = x_[i + 1] - x_[i];
      ynext = y_[i + 1];
      mnext = m_[i + 1];
    }
    const double A = (x_[i] + hi - tt) / hi;
    const double B = 1.0 - A;
    if (deriv == 0)
      return A * y_[i] + B * ynext +
             ((A * A * A - A) * m_[i] + (B * B * B - B) * mnext) * hi * hi /
                 6.0;
    if (deriv == 1)
      return (ynext - y_[i]) / hi +
             ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * mnext) * hi /
                 6.0;
    return A * m_[i] + B * mnext;
  }

 private:
  static void solve_tridiag(std::vector<double>& a, std::vector<double>& b,
                            std::vector<double>& c, std::vector<double>& d,
                            std::vector<double>& out) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    out[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i)
      out[i] = (d[i] - c[i] * out[i + 1]) / b[i];
  }

  // Cyclic tridiagonal via Sherman-Morrison. The sub-diagonal of row i is
  // the wrap segment length, equal to upper[(i-1+n)%n].
  static void solve_cyclic(const std::vector<double>& diag,
                           const std::vector<double>& upper,
                           const std::vector<double>& rhs,
                           std::vector<double>& out) {
    const int n = static_cast<int>(diag.size());
    const double alpha = upper[n - 1];  // corner (0, n-1) and (n-1, 0)
    const double gamma = -diag[0];
    std::vector<double> b(diag), a(n), c(n), d1(rhs), d2(n, 0.0), y(n), z(n);
    for (int i = 0; i < n; ++i) {
      a[i] = upper[(i - 1 + n) % n];
      c[i] = upper[i];
    }
    b[0] -= gamma;
    b[n - 1] -= alpha * alpha / gamma;
    d2[0] = gamma;
    d2[n - 1] = alpha;
    auto solve = [&](std::vector<double> dd, std::vector<double>& res) {
      std::vector<double> bb(b), cc(c), aa(a);
      for (int i = 1; i < n; ++i) {
        const double w = aa[i] / bb[i - 1];
        bb[i] -= w * cc[i - 1];
        dd[i] -= w * dd[i - 1];
      }
      res[n - 1] = dd[n - 1] / bb[n - 1];
      for (int i = n - 2; i >= 0; --i)
        res[i] = (dd[i] - cc[i] * res[i + 1]) / bb[i];
    };
    // interior couplings only; corner handled by rank-one update
    a[0] = 0.0;
    c[n - 1] = 0.0;
    solve(d1, y);
    solve(d2, z);
    const double fact =
        (y[0] + alpha * y[n - 1] / gamma) / (1.0 + z[0] + alpha * z[n - 1] / gamma);
    for (int i = 0; i < n; ++i) out[i] = y[i] - fact * z[i];
  }

  std::vector<double> x_, y_;
  std::vector<double> m_;
  bool periodic_ = false;
  double period_ = 0.0;
};

}  // namespace detail

/// Positive weight on the sphere of normals, evaluated by grid angle
/// (theta on the circle, polar angle phi on the axisymmetric grid).
/// Carries its defining expression for config echo and reproducibility.
class AnisotropyField {
 public:
  static AnisotropyField constant(double c) {
    AnisotropyField f;
    f.spec_ = "const:" + format(c);
    f.val_ = [c](double) { return c; };
    f.d1_ = [](double) { return 0.0; };
    f.validate();
    return f;
  }

  /// 1 + c * cos(angle): the affine-in-direction field 1 + c * z_axis.
  static AnisotropyField axis_affine(double c) {
    AnisotropyField f;
    f.spec_ = "axis-affine:" + format(c);
    f.val_ = [c](double a) { return 1.0 + c * std::cos(a); };
    f.d1_ = [c](double a) { return -c * std::sin(a); };
    f.validate();
    return f;
  }

  static AnisotropyField cosine(double base, double amp) {
    AnisotropyField f;
    f.spec_ = "cos:" + format(base) + "," + format(amp);
    f.val_ = [=](double a) { return base + amp * std::cos(a); };
    f.d1_ = [=](double a) { return -amp * std::sin(a); };
    f.validate();
    return f;
  }

  /// Node-sampled field with cubic interpolation between nodes.
  static AnisotropyField tabulated(const GridSpec& grid,
                                   const std::vector<double>& values) {
    AnisotropyField f;
    f.spec_ = "tabulated:" + std::to_string(grid.node_count());
    std::vector<double> x(grid.node_count());
    for (int j = 0; j < grid.node_count(); ++j) x[j] = grid.angle(j);
    auto sp = std::make_shared<detail::CubicSpline>(
        std::move(x), values, grid.kind() == GridKind::circle,
        2.0 * std::numbers::pi);
    f.val_ = [sp](double a) { return sp->eval(a, 0); };
    f.d1_ = [sp](double a) { return sp->eval(a, 1); };
    f.domain_hi_ = grid.kind() == GridKind::circle ? 2.0 * std::numbers::pi
                                                   : std::numbers::pi;
    f.validate();
    return f;
  }

  /// f^q, with the chain-rule tangential derivative.
  AnisotropyField pow(double q) const {
    AnisotropyField f;
    f.spec_ = "pow:" + format(q) + "(" + spec_ + ")";
    auto base_v = val_;
    auto base_d = d1_;
    f.val_ = [=](double a) { return std::pow(base_v(a), q); };
    f.d1_ = [=](double a) {
      return q * std::pow(base_v(a), q - 1.0) * base_d(a);
    };
    f.domain_hi_ = domain_hi_;
    f.validate();
    return f;
  }

  AnisotropyField scaled(double c) const {
    AnisotropyField f;
    f.spec_ = "scale:" + format(c) + "(" + spec_ + ")";
    auto base_v = val_;
    auto base_d = d1_;
    f.val_ = [=](double a) { return c * base_v(a); };
    f.d1_ = [=](double a) { return c * base_d(a); };
    f.domain_hi_ = domain_hi_;
    f.validate();
    return f;
  }

  /// Parse "const:1.0", "axis-affine:0.1", or "cos:1,0.2".
  static AnisotropyField from_spec(const std::string& s) {
    const auto colon = s.find(':');
    const std::string id = s.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
    std::vector<double> xs;
    std::istringstream in(args);
    std::string tok;
    while (std::getline(in, tok, ',')) xs.push_back(std::stod(tok));
    if (id == "const" && xs.size() == 1) return constant(xs[0]);
    if (id == "axis-affine" && xs.size() == 1) return axis_affine(xs[0]);
    if (id == "cos" && xs.size() == 2) return cosine(xs[0], xs[1]);
    throw ConfigError("unknown anisotropy spec: " + s);
  }

  double value(double angle) const { return val_(angle); }
  double deriv(double angle) const { return d1_(angle); }
  const std::string& spec() const { return spec_; }

  double min_sampled() const { return min_; }
  double max_sampled() const { return max_; }

  std::vector<double> sample(const GridSpec& grid) const {
    std::vector<double> out(grid.node_count());
    for (int j = 0; j < grid.node_count(); ++j) out[j] = val_(grid.angle(j));
    return out;
  }

 private:
  void validate(int samples = 512) {
    min_ = val_(0.0);
    max_ = min_;
    for (int j = 1; j <= samples; ++j) {
      const double v = val_(domain_hi_ * j / samples);
      min_ = std::min(min_, v);
      max_ = std::max(max_, v);
    }
    if (!(min_ > 0.0))
      throw ConfigError("anisotropy " + spec_ + " is not positive (min " +
                        std::to_string(min_) + ")");
  }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::function<double(double)> val_;
  std::function<double(double)> d1_;
  std::string spec_;
  double domain_hi_ = 2.0 * std::numbers::pi;
  double min_ = 0.0, max_ = 0.0;
};

}  // namespace gcf
