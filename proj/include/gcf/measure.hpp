#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "gcf/anisotropy.hpp"
#include "gcf/curvature.hpp"
#include "gcf/errors.hpp"
#include "gcf/support_function.hpp"

namespace gcf {

/// Discrete measure on node-centered sphere cells: weight_j approximates
/// the u^{1-p} dS mass of cell j.
struct LpMeasure {
  double p = 1.0;
  std::vector<double> weights;

  double total() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
  }
};

/// Cell weight u^{1-p} * (1/K) * cell area. p = 1 reduces to the surface
/// area measure, p = 0 to the cone-volume measure.
inline LpMeasure lp_measure(const SupportFunction& u, double p) {
  if (p > 1.0 && u.min_value() < 1e-8 * diameter(u))
    throw OriginOnBoundaryError("u^{1-p} diverges: min u = " +
                                std::to_string(u.min_value()));
  if (p != 1.0 && u.min_value() < 0.0)
    throw OriginOnBoundaryError("u^{1-p} needs a nonnegative support "
                                "function; min u = " +
                                std::to_string(u.min_value()));
  const CurvatureData c = curvature(u);
  const std::vector<double> det = radius_determinant(c);
  const GridSpec& g = u.grid();
  LpMeasure m;
  m.p = p;
  m.weights.resize(g.node_count());
  for (int j = 0; j < g.node_count(); ++j)
    m.weights[j] = std::pow(u.at(j), 1.0 - p) * det[j] * g.cell_area(j);
  return m;
}

/// Groups of node indices; each group is one Borel test set.
using Partition = std::vector<std::vector<int>>;

inline Partition singleton_partition(const GridSpec& g) {
  Partition p(g.node_count());
  for (int j = 0; j < g.node_count(); ++j) p[j] = {j};
  return p;
}

/// Contiguous bands of `width` nodes.
inline Partition band_partition(const GridSpec& g, int width) {
  Partition p;
  for (int j = 0; j < g.node_count(); j += width) {
    std::vector<int> cell;
    for (int k = j; k < std::min(j + width, g.node_count()); ++k)
      cell.push_back(k);
    p.push_back(std::move(cell));
  }
  return p;
}

struct GeneralizedSolutionReport {
  std::vector<double> residuals;  // per partition cell
  double max_abs = 0.0;
};

/// Residual of the measure identity per test set E:
///   residual_E = S_p(E) - integral_E f dsigma.
/// Zero for a generalized solution up to quadrature error.
inline GeneralizedSolutionReport check_generalized_solution(
    const SupportFunction& u, const AnisotropyField& f, double p,
    const Partition& partition) {
  const GridSpec& g = u.grid();
  std::vector<int> seen(g.node_count(), 0);
  for (const auto& cell : partition)
    for (int j : cell) {
      if (j < 0 || j >= g.node_count() || seen[j]++)
        throw ConfigError("partition must cover each node exactly once");
    }
  for (int j = 0; j < g.node_count(); ++j)
    if (!seen[j]) throw ConfigError("partition must cover the sphere grid");

  const LpMeasure m = lp_measure(u, p);
  GeneralizedSolutionReport rep;
  rep.residuals.reserve(partition.size());
  for (const auto& cell : partition) {
    double r = 0.0;
    for (int j : cell)
      r += m.weights[j] - f.value(g.angle(j)) * g.cell_area(j);
    rep.residuals.push_back(r);
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
  }
  return rep;
}

struct InradiusBoundReport {
  double lhs = 0.0;  // inradius
  double rhs = 0.0;  // C_n * V * u_max^{-n}
  bool holds = false;
  double p = 0.0;  // recorded for context; the bound itself is p-free
};

/// Checks rho_-(body) >= C_n * V * u_max^{-n} with the conservative
/// dimensional constant C_n = (n+1)^{-(n+1)}. Both sides are homogeneous
/// of degree 1 under scaling.
inline InradiusBoundReport inradius_bound_check(const SupportFunction& u,
                                                double p = 0.0) {
  const int n = u.grid().dim();
  const double cn = std::pow(n + 1.0, -(n + 1.0));
  InradiusBoundReport rep;
  rep.p = p;
  rep.lhs = inradius(u);
  rep.rhs = cn * volume(u) * std::pow(u.max_value(), -n);
  rep.holds = rep.lhs >= rep.rhs;
  return rep;
}

}  // namespace gcf
