#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gcf/bounds.hpp"
#include "gcf/evolution_checks.hpp"
#include "gcf/soliton.hpp"

using namespace gcf;

namespace {

DiagnosticSeries power_series(double coeff, double expo, double t_lo,
                              double t_hi, int count,
                              double rel_perturb = 0.0) {
  DiagnosticSeries s;
  for (int i = 0; i < count; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (count - 1);
    s.t.push_back(t);
    s.q.push_back(coeff * std::pow(t, expo) * (1.0 + rel_perturb * t));
  }
  return s;
}

/// Series saturating the normalized bound shape exactly: C (1 + t^-beta).
DiagnosticSeries saturating_series(double C, double beta, double T,
                                   int count) {
  DiagnosticSeries s;
  for (int i = 1; i <= count; ++i) {
    const double t = T * i / count;
    s.t.push_back(t);
    s.q.push_back(C * (1.0 + std::pow(t, -beta)));
  }
  return s;
}

}  // namespace

TEST_CASE("exponent fits recover power laws") {
  auto s = power_series(1.0, -2.0, 0.1, 1.0, 40);
  auto fit = fit_exponent(s.t, s.q);
  CHECK(std::abs(fit.slope + 2.0) < 1e-10);
  CHECK(fit.residual < 1e-12);

  auto s2 = power_series(3.0, -0.5, 1e-3, 1e-2, 32, 0.01);
  auto fit2 = fit_exponent(s2.t, s2.q);
  CHECK(std::abs(fit2.slope + 0.5) < 0.01);

  auto s3 = power_series(4.2, 0.0, 0.5, 2.0, 16);
  CHECK(std::abs(fit_exponent(s3.t, s3.q).slope) < 1e-12);

  std::vector<double> short_t = {1, 2, 3}, short_q = {1, 1, 1};
  CHECK_THROWS_AS(fit_exponent(short_t, short_q), DegenerateWindowError);
}

TEST_CASE("gauss bound verdict on shrinking round bodies") {
  GridSpec g(GridKind::circle, 64);
  FlowParams params(1, 1.0, AnisotropyField::constant(1.0));
  StepControl ctl;
  ctl.t_end = 0.25;
  ctl.min_radius_stop = 1e-3;
  auto traj = evolve(SupportFunction::ball(g, 1.0), params, ctl);
  auto rep = verify_gauss_bound(traj, params);
  CHECK(rep.bounded);
  CHECK(rep.exponent == doctest::Approx(0.5));

  GridSpec ga(GridKind::axisymmetric, 33);
  FlowParams p2(2, 0.5, AnisotropyField::constant(1.0));
  StepControl ctl2;
  ctl2.t_end = 0.25;
  ctl2.min_radius_stop = 1e-3;
  auto traj2 = evolve(SupportFunction::ball(ga, 1.0), p2, ctl2);
  auto rep2 = verify_gauss_bound(traj2, p2);
  CHECK(rep2.bounded);
  CHECK(rep2.exponent == doctest::Approx(1.0));
}

TEST_CASE("eccentric ellipse flow stays within the gauss rate") {
  GridSpec g(GridKind::circle, 192);
  FlowParams params(1, 1.0, AnisotropyField::constant(1.0));
  StepControl ctl;
  ctl.t_end = 1.6;  // past the actual extinction; the floor stops the run
  ctl.min_radius_stop = 0.02;
  ctl.snapshot_count = 300;
  auto traj = evolve(SupportFunction::ellipse(g, 3.0, 1.0), params, ctl);
  CHECK(traj.stop == StopReason::radius_floor);
  auto rep = verify_gauss_bound(traj, params);
  CHECK(rep.bounded);
}

TEST_CASE("ellipses are exact homotheties of the cube-root curve flow") {
  // u = sqrt(a^2 cos^2 + b^2 sin^2) has r1 u^3 = a^2 b^2, so with
  // alpha = 1/3 the shrinking ellipse is self-similar with scale factor
  // a(t) = (1 - (4/3) (a b)^{-2/3} t)^{3/4}; K_max follows in closed form.
  const double a = 3.0, b = 1.0;
  GridSpec g(GridKind::circle, 256);
  FlowParams params(1, 1.0 / 3.0,
                    AnisotropyField::constant(std::pow(a * b, 2.0 / 3.0)));
  StepControl ctl;
  const double T = 0.75 * std::pow(a * b, 2.0 / 3.0) /
                   std::pow(a * b, 2.0 / 3.0);  // = 3/4 in rescaled time
  ctl.t_end = 0.5 * T;
  ctl.min_radius_stop = 1e-3;
  auto traj = evolve(SupportFunction::ellipse(g, a, b), params, ctl);
  double worst = 0.0;
  for (const auto& s : traj.snapshots) {
    const double scale = std::pow(1.0 - s.t / T, 0.75);
    const double k_expect = (a / (b * b)) / scale;
    worst = std::max(worst,
                     std::abs(s.diag.gauss_max - k_expect) / k_expect);
  }
  CHECK(worst < 2e-3);
}

TEST_CASE("lambda bound verdict and regime guard") {
  GridSpec g(GridKind::axisymmetric, 65);
  FlowParams params(2, 0.5, AnisotropyField::axis_affine(0.1));
  StepControl ctl;
  ctl.t_end = 1.0;
  ctl.min_radius_stop = 0.03;
  ctl.snapshot_count = 300;
  auto traj = evolve(SupportFunction::ellipse(g, 1.0, 1.3), params, ctl);
  auto rep = verify_lambda_bound(traj, params);
  CHECK(rep.bounded);
  CHECK(rep.exponent == doctest::Approx(2.5));

  FlowParams bad(2, 1.2, AnisotropyField::constant(1.0));
  CHECK_THROWS_AS(verify_lambda_bound(traj, bad), RegimeViolationError);

  // near the regime edge with mild anisotropy
  FlowParams edge(2, 0.9, AnisotropyField::axis_affine(0.1));
  StepControl ctl9;
  ctl9.t_end = 2.0 * barrier_time(edge, 1.3);
  ctl9.min_radius_stop = 0.03;
  ctl9.snapshot_count = 300;
  auto traj9 = evolve(SupportFunction::ellipse(g, 1.0, 1.3), edge, ctl9);
  CHECK(verify_lambda_bound(traj9, edge).bounded);

  // verdict survives the flow's scaling symmetry u -> s u, t -> s^{na+1} t
  const double s = 2.0, e = std::pow(s, 2.0 * 0.5 + 1.0);
  DiagnosticSeries scaled;
  for (const auto& snap : traj.snapshots) {
    scaled.t.push_back(snap.t * e);
    scaled.q.push_back(snap.diag.lambda_max / s);
  }
  CHECK(verify_lambda_bound(scaled, params).bounded == rep.bounded);
}

TEST_CASE("saturating series normalize to a flat profile") {
  // the three round report kinds: gauss n=1, gauss n=2, lambda n=2
  FlowParams c1(1, 1.0, AnisotropyField::constant(1.0));
  FlowParams s2(2, 0.5, AnisotropyField::constant(1.0));
  const double b_g1 = 1.0 / 2.0, b_g2 = 2.0 / 2.0, b_l2 = 2.5 / 1.0;
  auto r1 = verify_gauss_bound(saturating_series(7.0, b_g1, 0.4, 400), c1);
  auto r2 = verify_gauss_bound(saturating_series(7.0, b_g2, 0.4, 400), s2);
  auto r3 = verify_lambda_bound(saturating_series(7.0, b_l2, 0.4, 400), s2);
  for (const auto& rep : {r1, r2, r3}) {
    CHECK(rep.bounded);
    CHECK(std::abs(rep.sup_q - rep.median_q) <= 1e-6 * rep.median_q);
    CHECK(rep.sup_q == doctest::Approx(7.0).epsilon(1e-9));
  }
}

TEST_CASE("tabulated fields interpolate smooth data accurately") {
  // periodic spline through cos(theta) samples
  GridSpec g(GridKind::circle, 32);
  std::vector<double> vals(g.node_count());
  for (int j = 0; j < g.node_count(); ++j)
    vals[j] = 2.0 + std::cos(g.angle(j));
  auto f = AnisotropyField::tabulated(g, vals);
  for (int k = 0; k < 200; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.31) / 200.0;
    CHECK(f.value(th) == doctest::Approx(2.0 + std::cos(th)).epsilon(1e-5));
    CHECK(f.deriv(th) == doctest::Approx(-std::sin(th)).epsilon(1e-3));
  }
  // node values are reproduced exactly
  for (int j = 0; j < g.node_count(); ++j)
    CHECK(f.value(g.angle(j)) == doctest::Approx(vals[j]).epsilon(1e-14));

  // clamped spline on the axisymmetric grid honors the pole symmetry
  GridSpec ga(GridKind::axisymmetric, 33);
  std::vector<double> av(ga.node_count());
  for (int j = 0; j < ga.node_count(); ++j)
    av[j] = 1.0 + 0.3 * std::cos(ga.angle(j));
  auto fa = AnisotropyField::tabulated(ga, av);
  CHECK(std::abs(fa.deriv(0.0)) < 1e-12);
  CHECK(std::abs(fa.deriv(std::numbers::pi)) < 1e-12);
  CHECK(fa.value(1.234) == doctest::Approx(1.0 + 0.3 * std::cos(1.234))
                               .epsilon(1e-4));
}

TEST_CASE("manufactured soliton densities") {
  GridSpec g(GridKind::circle, 64);
  const double R = 1.4, p = -0.5;
  auto f = make_soliton_field(SupportFunction::ball(g, R), p);
  for (int j = 0; j < g.node_count(); ++j)
    CHECK(f.value(g.angle(j)) ==
          doctest::Approx(std::pow(R, 2.0 - p)).epsilon(1e-12));

  std::vector<double> v(g.node_count());
  for (int j = 0; j < g.node_count(); ++j)
    v[j] = 1.0 + 0.2 * std::cos(g.angle(j));
  SupportFunction u0(g, v);
  auto f0 = make_soliton_field(u0, 0.0);
  CHECK(f0.min_sampled() > 0.0);
  for (int j = 0; j < g.node_count(); ++j)
    CHECK(f0.value(g.angle(j)) ==
          doctest::Approx(u0.at(j)).epsilon(1e-3));  // r1 = 1 + O(h^2)

  // homogeneity: u -> s u scales the density by s^{n+1-p}
  auto fs = make_soliton_field(u0.scaled(2.0), 0.0);
  for (int j = 0; j < g.node_count(); ++j)
    CHECK(fs.value(g.angle(j)) ==
          doctest::Approx(4.0 * f0.value(g.angle(j))).epsilon(1e-12));

  CHECK_THROWS_AS(
      make_soliton_field(SupportFunction::ball(g, 1.0, {1.0, 0.0, 0.0}), 0.0),
      OriginOnBoundaryError);
}

TEST_CASE("round soliton tracks the homothety to integrator accuracy") {
  GridSpec g(GridKind::circle, 64);
  StepControl ctl;
  ctl.t_end = 1.0;
  ctl.min_radius_stop = 1e-4;
  auto res = soliton_selfsimilarity_check(SupportFunction::ball(g, 1.0),
                                          0.0, ctl);
  CHECK(res.max_relative_deviation < 1e-6);
  CHECK(res.t_end == doctest::Approx(0.25));  // capped at half the lifetime
}

TEST_CASE("translated-disk and spheroid solitons stay self-similar") {
  GridSpec g(GridKind::circle, 96);
  std::vector<double> v(g.node_count());
  for (int j = 0; j < g.node_count(); ++j)
    v[j] = 1.0 + 0.2 * std::cos(g.angle(j));
  StepControl ctl;
  ctl.t_end = 1.0;
  ctl.min_radius_stop = 1e-4;
  auto res = soliton_selfsimilarity_check(SupportFunction(g, v), 0.0, ctl);
  CHECK(res.max_relative_deviation < 1e-3);

  GridSpec ga(GridKind::axisymmetric, 65);
  auto res2 = soliton_selfsimilarity_check(
      SupportFunction::ellipse(ga, 1.0, 1.3), -1.0, ctl);
  CHECK(res2.max_relative_deviation < 1e-3);
}

TEST_CASE("soliton deviation shrinks under refinement") {
  StepControl coarse;
  coarse.t_end = 1.0;
  coarse.min_radius_stop = 1e-4;
  StepControl fine = coarse;
  fine.safety = 0.025;

  auto mk = [](int nodes) {
    GridSpec g(GridKind::circle, nodes);
    std::vector<double> v(g.node_count());
    for (int j = 0; j < g.node_count(); ++j)
      v[j] = 1.0 + 0.2 * std::cos(g.angle(j));
    return SupportFunction(g, v);
  };
  const double d_coarse =
      soliton_selfsimilarity_check(mk(64), 0.0, coarse).max_relative_deviation;
  const double d_fine =
      soliton_selfsimilarity_check(mk(128), 0.0, fine).max_relative_deviation;
  CHECK(d_fine <= 0.5 * d_coarse);
}
