// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerance in code next to the check.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gcf/bounds.hpp"
#include "gcf/chou_wang.hpp"
#include "gcf/evolution_checks.hpp"
#include "gcf/flow.hpp"
#include "gcf/glued_body.hpp"
#include "gcf/holder.hpp"
#include "gcf/measure.hpp"
#include "gcf/minkowski_ode.hpp"
#include "gcf/soliton.hpp"

using namespace gcf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

SupportFunction cosine_body(const GridSpec& g, double base, double amp) {
  std::vector<double> v(g.node_count());
  for (int j = 0; j < g.node_count(); ++j)
    v[j] = base + amp * std::cos(g.angle(j));
  return SupportFunction(g, std::move(v));
}

// 1. numerical radius of shrinking balls vs the closed form
//    rho(t) = (1 - (n a + 1) t)^{1/(n a + 1)}, relative error < 1e-3 over
//    half the lifetime, under 30 s per case
Outcome criterion_shrinking_ball() {
  double worst_err = 0.0, worst_time = 0.0;
  for (int n : {1, 2})
    for (double alpha : {0.5, 1.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      const GridSpec grid = n == 1 ? GridSpec(GridKind::circle, 64)
                                   : GridSpec(GridKind::axisymmetric, 65);
      FlowParams params(n, alpha, AnisotropyField::constant(1.0));
      StepControl ctl;
      const double e = n * alpha + 1.0;
      ctl.t_end = 0.5 / e;
      ctl.min_radius_stop = 1e-4;
      const FlowTrajectory traj =
          evolve(SupportFunction::ball(grid, 1.0), params, ctl);
      for (const auto& s : traj.snapshots) {
        const double rho = std::pow(1.0 - e * s.t, 1.0 / e);
        for (int j = 0; j < grid.node_count(); ++j)
          worst_err = std::max(worst_err, std::abs(s.u.at(j) - rho) / rho);
      }
      worst_time = std::max(worst_time, seconds_since(t0));
    }
  return {worst_err < 1e-3 && worst_time < 30.0,
          fmt("max rel err %.2e (tol 1e-3), max runtime %.1f s (cap 30 s)",
              worst_err, worst_time)};
}

// 2. manufactured solitons follow the homothety a(t) u0 within 1e-3
Outcome criterion_soliton() {
  const auto t0 = std::chrono::steady_clock::now();
  StepControl ctl;
  ctl.t_end = 1.0;
  ctl.min_radius_stop = 1e-4;

  const GridSpec gc(GridKind::circle, 96);
  const double dev1 =
      soliton_selfsimilarity_check(cosine_body(gc, 1.0, 0.2), 0.0, ctl)
          .max_relative_deviation;

  const GridSpec ga(GridKind::axisymmetric, 65);
  const double dev2 = soliton_selfsimilarity_check(
                          SupportFunction::ellipse(ga, 1.0, 1.3), -1.0, ctl)
                          .max_relative_deviation;
  const double secs = seconds_since(t0);
  return {dev1 < 1e-3 && dev2 < 1e-3 && secs < 120.0,
          fmt("deviations %.2e / %.2e (tol 1e-3), runtime %.1f s (cap 120 s)",
              dev1, dev2, secs)};
}

// 3. normalized curvature series of the anisotropic spheroid flow stay
//    within sup/median <= 10 over the fit window
Outcome criterion_bounds() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.0}) {
    FlowParams params(2, alpha, AnisotropyField::axis_affine(0.1));
    const GridSpec grid(GridKind::axisymmetric, 65);
    const SupportFunction u0 = SupportFunction::ellipse(grid, 1.0, 1.3);
    StepControl ctl;
    ctl.t_end = 2.0 * barrier_time(params, u0.max_value());
    ctl.min_radius_stop = 0.03;
    ctl.snapshot_count = 300;
    const FlowTrajectory traj = evolve(u0, params, ctl);
    const BoundReport g = verify_gauss_bound(traj, params);
    const BoundReport l = verify_lambda_bound(traj, params);
    ok = ok && g.bounded && l.bounded;
    detail += fmt("alpha=%.1f: K %.2f, lambda %.2f; ", alpha,
                  g.sup_q / g.median_q, l.sup_q / l.median_q);
  }
  return {ok, detail + "sup/median cap 10"};
}

// 4. evolution identities: dt-refinement order >= 1 on an anisotropic
//    curve flow, residual <= 1e-6 on round closed-form data
Outcome criterion_identities() {
  GridSpec g(GridKind::circle, 256);
  FlowParams params(1, 1.0, AnisotropyField::axis_affine(0.1));
  StepControl ctl;
  ctl.t_end = 0.12;
  ctl.min_radius_stop = 1e-3;
  ctl.snapshot_count = 13;
  ctl.safety = 0.005;
  const IdentityReport ell = verify_evolution_identities(
      evolve(SupportFunction::ellipse(g, 1.2, 1.0), params, ctl), params);

  GridSpec gs(GridKind::axisymmetric, 17);
  FlowParams round2(2, 0.5, AnisotropyField::constant(1.0));
  const IdentityReport r2 = verify_evolution_identities(
      round_closed_form_trajectory(gs, round2, 1.0, 0.05, 0.15, 501), round2);
  GridSpec gc(GridKind::circle, 16);
  FlowParams round1(1, 1.0, AnisotropyField::constant(1.0));
  const IdentityReport r1 = verify_evolution_identities(
      round_closed_form_trajectory(gc, round1, 1.0, 0.05, 0.15, 501), round1);

  const double round_worst =
      std::max({r1.metric_residual, r1.speed_residual, r2.metric_residual,
                r2.speed_residual});
  const bool ok = ell.metric_order >= 1.0 && ell.speed_order >= 1.0 &&
                  round_worst <= 1e-6;
  return {ok, fmt("dt orders %.2f / %.2f (floor 1), round residual %.1e "
                  "(tol 1e-6)",
                  ell.metric_order, ell.speed_order, round_worst)};
}

// 5. Picard contraction with certificates for m in {0.5, 1, 1.5, 2}
Outcome criterion_contraction() {
  bool ok = true;
  std::string detail;
  for (double m : {0.5, 1.0, 1.5, 2.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const OdeParams prm(2, m - 1.0);
    const SolveResult res = solve_profile(prm, 0.25);
    double worst_ratio = 0.0;
    for (const auto& it : res.log.iterations)
      if (it.index >= 2) worst_ratio = std::max(worst_ratio, it.ratio);
    const double residual = ode_residual(res.profile);
    const double cert = res.log.C0 * std::pow(res.log.r0, prm.delta);
    const double secs = seconds_since(t0);
    const bool good = res.log.certified && worst_ratio <= 0.6 &&
                      residual <= 1e-6 &&
                      cert <= 0.1 * std::min(m, 1.0 / m) && secs < 60.0;
    ok = ok && good;
    detail += fmt("m=%.1f: ratio %.2f, res %.0e; ", m, worst_ratio, residual);
  }
  return {ok, detail + "caps 0.6 / 1e-6 / (1/10)min(m,1/m) / 60 s"};
}

// 6. Holder slopes: solved profiles recover 1/m within 0.03, the closed
//    form example recovers 1/3 within 0.02, and m = 1 classifies as C^{1,1}
Outcome criterion_sharp_exponents() {
  std::string detail;
  bool ok = true;
  struct Case {
    double p, want, tol;
  } cases[] = {{0.5, 2.0 / 3.0, 0.03}, {0.0, 1.0, 0.03}};
  for (const auto& c : cases) {
    const SolveResult res = solve_profile(OdeParams(2, c.p), 0.25);
    std::vector<double> r, vr;
    profile_derivative_samples(res.profile, 0.1, r, vr);
    const HolderEstimate est = holder_exponent(r, vr);
    ok = ok && std::abs(est.slope - c.want) <= c.tol;
    detail += fmt("p=%.1f: slope %.4f; ", c.p, est.slope);
    if (c.p == 0.0) {
      ok = ok && est.k == 1 && est.gamma == 1.0;
      detail += fmt("class C^{%d,%g}; ", est.k, est.gamma);
    }
  }
  const ChouWangExample ex = chou_wang_example(2, 2.0);
  std::vector<double> r, vr;
  for (int i = 0; i < 160; ++i) {
    const double x = std::pow(10.0, -4.0 + 3.0 * i / 159.0);
    r.push_back(x);
    vr.push_back(ex.v_bar_r(x));
  }
  const HolderEstimate est = holder_exponent(r, vr);
  ok = ok && std::abs(est.slope - 1.0 / 3.0) <= 0.02;
  detail += fmt("closed form: slope %.4f (want 1/3)", est.slope);
  return {ok, detail};
}

// 7. radial Hessian determinant identity at 1e3 random radii per pair
Outcome criterion_determinant() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ur(0.05, 3.0);
  double worst = 0.0;
  for (auto [n, p] : {std::pair<int, double>{2, 2.0}, {3, 2.0}, {2, 0.5}}) {
    const ChouWangExample ex = chou_wang_example(n, p);
    for (int i = 0; i < 1000; ++i)
      worst = std::max(worst, ex.det_residual(ur(rng)));
  }
  return {worst <= 1e-10, fmt("max rel residual %.1e (tol 1e-10)", worst)};
}

// 8. power-mean inequality on 1e5 random triples
Outcome criterion_jensen() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ulog(-3.0, 3.0), uq(-3.0, 3.0);
  long violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const double a = std::pow(10.0, ulog(rng));
    const double b = std::pow(10.0, ulog(rng));
    if (!jensen_check(a, b, uq(rng), 1e-12)) ++violations;
  }
  return {violations == 0,
          fmt("%ld violations in 1e5 samples (slack 1e-12)", violations)};
}

// 9. ball L_p masses vs R^{n+1-p} |S^n|, and second-order decay of the
//    measure-identity residuals on manufactured densities
Outcome criterion_lp_measures() {
  double worst_mass = 0.0;
  for (int nodes : {64, 128}) {
    const GridSpec g(GridKind::circle, nodes);
    for (double R : {0.5, 1.0, 2.0})
      for (double p : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
        const double expect = std::pow(R, 2.0 - p) * g.sphere_area();
        const double got = lp_measure(SupportFunction::ball(g, R), p).total();
        worst_mass = std::max(worst_mass, std::abs(got - expect) / expect);
      }
  }
  for (int nodes : {65, 129}) {
    const GridSpec g(GridKind::axisymmetric, nodes);
    for (double R : {0.5, 2.0})
      for (double p : {-1.0, 0.5, 2.0}) {
        const double expect = std::pow(R, 3.0 - p) * g.sphere_area();
        const double got = lp_measure(SupportFunction::ball(g, R), p).total();
        worst_mass = std::max(worst_mass, std::abs(got - expect) / expect);
      }
  }

  // translated disk (p = 0, f = u) and spheroid (p = -3, f = a^4 b^2)
  double order1, order2;
  {
    double err[2];
    int idx = 0;
    for (int n : {64, 128}) {
      const GridSpec g(GridKind::circle, n);
      const SupportFunction u = cosine_body(g, 1.0, 0.2);
      const auto rep = check_generalized_solution(
          u, AnisotropyField::cosine(1.0, 0.2), 0.0, singleton_partition(g));
      err[idx++] = rep.max_abs / g.cell_area(0);
    }
    order1 = std::log2(err[0] / err[1]);
  }
  {
    double err[2];
    int idx = 0;
    for (int n : {65, 129}) {
      const GridSpec g(GridKind::axisymmetric, n);
      const auto rep = check_generalized_solution(
          SupportFunction::ellipse(g, 1.0, 1.3),
          AnisotropyField::constant(1.3 * 1.3), -3.0, singleton_partition(g));
      double worst = 0.0;
      for (size_t k = 0; k < rep.residuals.size(); ++k)
        worst = std::max(worst, std::abs(rep.residuals[k]) / g.cell_area(k));
      err[idx++] = worst;
    }
    order2 = std::log2(err[0] / err[1]);
  }
  const bool ok = worst_mass < 1e-3 && order1 >= 1.9 && order2 >= 1.9;
  return {ok, fmt("ball mass rel err %.1e (tol 1e-3), residual orders "
                  "%.2f / %.2f (floor 1.9)",
                  worst_mass, order1, order2)};
}

// 10. caps around the flat side lose their u^{1-p} dS mass under shrinking
Outcome criterion_flat_part() {
  bool ok = true;
  std::string detail;
  for (double p : {0.0, 0.5}) {
    const SolveResult res = solve_profile(OdeParams(2, p), 0.25);
    const auto body = build_glued_body(
        std::make_shared<const RadialProfile>(res.profile));
    const double psi0 = 0.9 * std::atan(body.v_r[body.join_index]);
    std::vector<double> angles;
    for (int k = 0; k < 12; ++k) angles.push_back(psi0 / std::pow(2.0, k));
    const FlatPartReport rep = flat_part_measure_check(body, p, angles);
    bool decreasing = true;
    for (size_t k = 1; k < rep.masses.size(); ++k)
      decreasing = decreasing && rep.masses[k] < rep.masses[k - 1];
    const double frac = rep.masses.back() / rep.total_mass;
    ok = ok && decreasing && frac < 1e-6;
    detail += fmt("p=%.1f: final/total %.1e; ", p, frac);
  }
  return {ok, detail + "cap 1e-6, strictly decreasing"};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"shrinking-ball oracle", criterion_shrinking_ball},
      {"soliton self-similarity", criterion_soliton},
      {"normalized curvature boundedness", criterion_bounds},
      {"evolution identities", criterion_identities},
      {"Picard contraction certificates", criterion_contraction},
      {"sharp Holder exponents", criterion_sharp_exponents},
      {"radial determinant identity", criterion_determinant},
      {"power-mean inequality property", criterion_jensen},
      {"Lp measure quadrature", criterion_lp_measures},
      {"flat-side measure cancellation", criterion_flat_part},
  };
  int failures = 0;
  int idx = 0;
  for (const auto& e : entries) {
    ++idx;
    Outcome oc;
    try {
      oc = e.fn();
    } catch (const std::exception& ex) {
      oc.pass = false;
      oc.detail = std::string("exception: ") + ex.what();
    }
    std::printf("%s criterion %2d: %s (%s)\n", oc.pass ? "PASS" : "FAIL",
                idx, e.name, oc.detail.c_str());
    std::fflush(stdout);
    if (!oc.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
