#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/flow.hpp"

namespace gcf {

/// Least-squares fit of log(quantity) against log(t) over a window.
struct ExponentFit {
  double t_lo = 0.0, t_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;  // of log(q) at log(t) = 0
  double residual = 0.0;   // rms in log-log
  int samples = 0;
};

/// q(t) = quantity(t) / (1 + t^{-exponent}); bounded when the sampled sup
/// stays within ratio_cap of the median.
struct BoundReport {
  std::string bound_id;
  double exponent = 0.0;
  double sup_q = 0.0;
  double median_q = 0.0;
  bool bounded = false;
  double t_lo = 0.0, t_hi = 0.0;
};

struct BoundOptions {
  // Window defaults to [1e-3, 1e-1] of the trajectory's final time, which
  // should be near extinction for rate checks.
  double window_lo_frac = 1e-3;
  double window_hi_frac = 1e-1;
  double ratio_cap = 10.0;
  int min_samples = 8;
};

/// Scalar diagnostic series; decoupled from FlowTrajectory so synthetic
/// closed-form data can be screened by the same code.
struct DiagnosticSeries {
  std::vector<double> t;
  std::vector<double> q;
};

inline DiagnosticSeries gauss_series(const FlowTrajectory& traj) {
  DiagnosticSeries s;
  for (const auto& snap : traj.snapshots) {
    s.t.push_back(snap.t);
    s.q.push_back(snap.diag.gauss_max);
  }
  return s;
}

inline DiagnosticSeries lambda_series(const FlowTrajectory& traj) {
  DiagnosticSeries s;
  for (const auto& snap : traj.snapshots) {
    s.t.push_back(snap.t);
    s.q.push_back(snap.diag.lambda_max);
  }
  return s;
}

inline ExponentFit fit_exponent(const std::vector<double>& t,
                                const std::vector<double>& q) {
  if (t.size() != q.size() || t.size() < 8)
    throw DegenerateWindowError("need at least 8 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !(q[i] > 0.0))
      throw DegenerateWindowError("samples must be positive");
    const double x = std::log(t[i]), y = std::log(q[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-12 * n * sxx)
    throw DegenerateWindowError("samples do not span a time interval");
  ExponentFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = std::log(q[i]) - fit.slope * std::log(t[i]) - fit.intercept;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.t_lo = *std::min_element(t.begin(), t.end());
  fit.t_hi = *std::max_element(t.begin(), t.end());
  fit.samples = n;
  return fit;
}

namespace detail {

inline BoundReport normalized_bound_report(const DiagnosticSeries& series,
                                           const std::string& id,
                                           double exponent,
                                           const BoundOptions& opt) {
  if (series.t.empty()) throw DegenerateWindowError("empty series");
  const double T = series.t.back();
  const double lo = opt.window_lo_frac * T, hi = opt.window_hi_frac * T;
  std::vector<double> qs;
  BoundReport rep;
  rep.bound_id = id;
  rep.exponent = exponent;
  rep.t_lo = lo;
  rep.t_hi = hi;
  for (size_t i = 0; i < series.t.size(); ++i) {
    const double t = series.t[i];
    if (t < lo || t > hi || !(t > 0.0)) continue;
    qs.push_back(series.q[i] / (1.0 + std::pow(t, -exponent)));
  }
  if (static_cast<int>(qs.size()) < opt.min_samples)
    throw DegenerateWindowError("bound window holds " +
                                std::to_string(qs.size()) + " samples");
  std::sort(qs.begin(), qs.end());
  rep.sup_q = qs.back();
  rep.median_q = qs[qs.size() / 2];
  rep.bounded = rep.sup_q <= opt.ratio_cap * rep.median_q;
  return rep;
}

}  // namespace detail

/// Gauss curvature rate screen: K_max against 1 + t^{-n/(n alpha + 1)}.
inline BoundReport verify_gauss_bound(const DiagnosticSeries& series,
                                      const FlowParams& params,
                                      const BoundOptions& opt = {}) {
  const double beta = params.n / (params.n * params.alpha + 1.0);
  return detail::normalized_bound_report(series, "gauss", beta, opt);
}

inline BoundReport verify_gauss_bound(const FlowTrajectory& traj,
                                      const FlowParams& params,
                                      const BoundOptions& opt = {}) {
  return verify_gauss_bound(gauss_series(traj), params, opt);
}

/// Principal curvature rate screen: lambda_max against
/// 1 + t^{-(2+alpha)/((n alpha + 1) alpha)}. Only meaningful in the regime
/// n >= 2, alpha <= 1/(n-1).
inline BoundReport verify_lambda_bound(const DiagnosticSeries& series,
                                       const FlowParams& params,
                                       const BoundOptions& opt = {}) {
  if (!params.bound_regime())
    throw RegimeViolationError("needs n >= 2 and alpha <= 1/(n-1)");
  const double beta = (2.0 + params.alpha) /
                      ((params.n * params.alpha + 1.0) * params.alpha);
  return detail::normalized_bound_report(series, "lambda", beta, opt);
}

inline BoundReport verify_lambda_bound(const FlowTrajectory& traj,
                                       const FlowParams& params,
                                       const BoundOptions& opt = {}) {
  return verify_lambda_bound(lambda_series(traj), params, opt);
}

}  // namespace gcf
