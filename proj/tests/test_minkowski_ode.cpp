#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gcf/minkowski_ode.hpp"

using namespace gcf;

namespace {

std::shared_ptr<const RadialMesh> make_mesh(int n, double p, double r0,
                                            int J = 512) {
  return std::make_shared<const RadialMesh>(OdeParams(n, p), r0, J);
}

RadialProfile shift_by_model(const RadialProfile& prof, double eps) {
  RadialProfile out = prof;
  for (int j = 0; j < prof.size(); ++j) {
    out.w[j] += eps * prof.mesh->h[j];
    out.w_r[j] += eps * prof.mesh->h_r[j];
    out.w_rr[j] += eps * prof.mesh->h_rr[j];
  }
  return out;
}

}  // namespace

TEST_CASE("model profile closed forms and defining identity") {
  auto v = model_h(0.2, 1.0);
  CHECK(v.h == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(v.h_r == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(v.h_rr == doctest::Approx(1.0).epsilon(1e-15));

  auto v2 = model_h(1.0, 2.0);
  CHECK(v2.h_r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(v2.h_rr == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.1, 10.0), ur(1e-4, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double m = um(rng), r = ur(rng);
    auto mv = model_h(r, m);
    CHECK(mv.h_rr * std::pow(mv.h_r, m - 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bracket operators on the model profile") {
  for (double p : {0.0, 0.5, -0.5}) {
    auto mesh = make_mesh(2, p, 0.5);
    const double m = mesh->params.m;
    RadialProfile prof(mesh);
    prof.w = mesh->h;
    prof.w_r = mesh->h_r;
    prof.w_rr = mesh->h_rr;
    for (int j = 0; j < prof.size(); j += 100) {
      auto b = brackets(prof, j);
      CHECK(b.r == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(b.rr == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(b.s == doctest::Approx(1.0 / (1.0 + m)).epsilon(1e-12));
    }

    RadialProfile zero(mesh);
    auto bz = brackets(zero, 10);
    CHECK(bz.r == 0.0);
    CHECK(bz.s == 0.0);
    CHECK(bz.rr == 0.0);

    // linearity
    RadialProfile half(mesh);
    for (int j = 0; j < prof.size(); ++j) {
      half.w[j] = 0.5 * prof.w[j];
      half.w_r[j] = 0.5 * prof.w_r[j];
      half.w_rr[j] = 0.5 * prof.w_rr[j];
    }
    CHECK(brackets(half, 77).r == doctest::Approx(0.5).epsilon(1e-13));
  }
}

TEST_CASE("weighted norm of the model profile") {
  auto mesh = make_mesh(2, 0.0, 1.0);  // m = 1
  RadialProfile prof(mesh);
  prof.w = mesh->h;
  prof.w_r = mesh->h_r;
  prof.w_rr = mesh->h_rr;
  auto rep = weighted_norm(prof, 0, prof.size() - 1);
  CHECK(rep.value == doctest::Approx(0.5).epsilon(1e-12));

  RadialProfile zero(mesh);
  CHECK(weighted_norm_value(zero, 2) == 0.0);

  // homogeneity of degree one
  RadialProfile threex(mesh);
  for (int j = 0; j < prof.size(); ++j) {
    threex.w[j] = 3.0 * prof.w[j];
    threex.w_r[j] = 3.0 * prof.w_r[j];
    threex.w_rr[j] = 3.0 * prof.w_rr[j];
  }
  CHECK(weighted_norm_value(threex, 2) ==
        doctest::Approx(3.0 * weighted_norm_value(prof, 2)).epsilon(1e-13));

  // monotone in the interval endpoint
  auto mid = weighted_norm(prof, 2, prof.size() / 2);
  auto full = weighted_norm(prof, 2, prof.size() - 1);
  CHECK(mid.value <= full.value + 1e-15);
}

TEST_CASE("error functional at the zero profile, frozen oracle") {
  // independent evaluation of the three closed forms for (n,p) = (2,0),
  // r = 0.1, m = 1, h_r = r
  const double r = 0.1, hr = 0.1;
  const double P1 = r * std::pow(1.0 + hr * hr, 1.5) * (1.0 + 0.5 * r);
  const double P2 = (std::pow(1.0 + hr * hr, 1.5) - 1.0) * (1.0 + 0.5 * r);
  const double Q = (1.0 + 0.5 * r) - 1.0;
  const double oracle = P1 + P2 + Q;
  CHECK(oracle == doctest::Approx(0.172368243).epsilon(1e-8));

  OdeParams prm(2, 0.0);
  auto e = error_parts(prm, 0.1, model_h(0.1, prm.m).h_r, Brackets{});
  CHECK(e.R1 == 0.0);
  CHECK(e.R2 == 0.0);
  CHECK(e.R3 == 0.0);
  CHECK(e.total() == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(e.total() == doctest::Approx(0.17237).epsilon(1e-4));
}

TEST_CASE("p = 1 short-circuits the combinatorial terms exactly") {
  OdeParams prm(2, 1.0);  // m = 2
  Brackets b;
  b.r = 0.17;
  b.s = -0.05;
  b.rr = 0.21;
  auto e = error_parts(prm, 0.3, model_h(0.3, prm.m).h_r, b);
  CHECK(e.Q == 0.0);
  CHECK(e.R1 == 0.0);
  CHECK(e.P2 != 0.0);
}

TEST_CASE("error functional vanishes towards the origin") {
  auto mesh = make_mesh(2, 0.5, 0.5, 2048);
  RadialProfile zero(mesh);
  auto E = error_values(zero);
  CHECK(std::abs(E.front()) <
        10.0 * std::pow(mesh->r.front(), mesh->params.delta));
  CHECK(std::abs(E.front()) < 1e-3 * std::abs(E.back()));
}

TEST_CASE("escaped iterates raise ModulusNonpositive") {
  OdeParams prm(2, 0.5);
  Brackets b;
  b.r = -1.5;
  CHECK_THROWS_AS(error_parts(prm, 0.1, model_h(0.1, prm.m).h_r, b),
                  ModulusNonpositiveError);
}

TEST_CASE("picard step is the identity at a fixed point") {
  auto mesh = make_mesh(2, 0.0, 0.25);
  RadialProfile zero(mesh);
  auto w1 = picard_first(zero);
  auto again = picard_step(w1, w1);
  for (int j = 0; j < w1.size(); ++j) {
    CHECK(again.w[j] == w1.w[j]);
    CHECK(again.w_r[j] == w1.w_r[j]);
  }
}

TEST_CASE("integral operator matches the constant-input closed form") {
  for (double mcase : {0.5, 1.0, 1.5, 2.0}) {
    auto mesh = make_mesh(1, mcase, 0.5, 2048);  // n=1 so p = m
    const double m = mesh->params.m;
    const double c = 0.73;
    std::vector<double> g(mesh->size(), c);
    auto out = detail::apply_step_operator(*mesh, g, c);
    const double e = 1.0 + 1.0 / m;
    for (int j = mesh->size() / 8; j < mesh->size(); j += 97) {
      const double r = mesh->r[j];
      const double expect = c * std::pow(r, e) / e;
      CHECK(out.w[j] == doctest::Approx(expect).epsilon(2e-5));
      CHECK(out.w_r[j] ==
            doctest::Approx(c * std::pow(r, e - 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("the step's own equation holds under finite differencing") {
  // L(w_next - w_curr) should reproduce m^{1/m-1} (E_i - E_{i-1}) when the
  // flux r^{1-1/m} w_r is differenced in the uniform sigma variable.
  auto mesh = make_mesh(2, 0.5, 0.25, 2048);
  const double m = mesh->params.m;
  RadialProfile zero(mesh);
  auto w1 = picard_first(zero);
  auto w2 = picard_step(zero, w1);

  auto E1 = error_values(w1);
  auto E0 = error_values(zero);
  const double scale = std::pow(m, 1.0 / m - 1.0);
  const int J = mesh->size();
  std::vector<double> flux(J);
  for (int j = 0; j < J; ++j)
    flux[j] = std::pow(mesh->r[j], 1.0 - 1.0 / m) * (w2.w_r[j] - w1.w_r[j]);
  double worst = 0.0;
  const double dsig = mesh->sigma[1] - mesh->sigma[0];
  for (int j = 1; j + 1 < J; ++j) {
    const double drds = m * std::pow(mesh->sigma[j], m - 1.0);
    const double Lw = (flux[j + 1] - flux[j - 1]) / (2.0 * dsig) / drds;
    worst = std::max(worst, std::abs(Lw - scale * (E1[j] - E0[j])));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("certified contraction for the reference exponent pairs") {
  for (double p : {0.0, 0.5}) {
    OdeParams prm(2, p);
    auto res = solve_profile(prm, 0.25);
    CHECK(res.log.certified);
    CHECK(res.log.C0 * std::pow(res.log.r0, prm.delta) <=
          0.1 * std::min(prm.m, 1.0 / prm.m) + 1e-12);
    for (const auto& it : res.log.iterations)
      if (it.index >= 2) CHECK(it.ratio <= 0.6);
    CHECK(ode_residual(res.profile) <= 1e-6);
    CHECK(std::abs(res.profile.w[0]) <= 10.0 * res.profile.mesh->h[0]);
    CHECK(std::abs(res.profile.w_r[0]) <= 10.0 * res.profile.mesh->h_r[0]);
  }
}

TEST_CASE("loose tolerance returns after a single step") {
  OdeParams prm(2, 0.0);
  SolveOptions opt;
  opt.tol = 1e9;
  auto res = solve_profile(prm, 0.01, opt);
  CHECK(res.log.iterations.size() == 1);
  auto mesh = std::make_shared<const RadialMesh>(prm, res.log.r0,
                                                 opt.mesh_size);
  auto w1 = picard_first(RadialProfile(mesh));
  for (int j = 0; j < w1.size(); j += 111)
    CHECK(res.profile.w[j] == doctest::Approx(w1.w[j]).epsilon(1e-14));
}

TEST_CASE("hopeless contraction cap exhausts the interval") {
  OdeParams prm(2, 0.0);
  SolveOptions opt;
  opt.ratio_cap = 1e-6;
  opt.r0_floor = 0.05;
  CHECK_THROWS_AS(solve_profile(prm, 0.2, opt), NoContractionError);
}

TEST_CASE("stored derivatives agree with finite differences of the values") {
  auto res = solve_profile(OdeParams(2, 0.5), 0.25);
  const RadialProfile& prof = res.profile;
  const RadialMesh& mesh = *prof.mesh;
  const int J = mesh.size();
  const double dsig = mesh.sigma[1] - mesh.sigma[0];
  const double m = mesh.params.m;
  double worst_r = 0.0, worst_rr = 0.0;
  for (int j = 2; j + 2 < J; ++j) {
    const double drds = m * std::pow(mesh.sigma[j], m - 1.0);
    const double fd_w_r =
        (prof.w[j + 1] - prof.w[j - 1]) / (2.0 * dsig) / drds;
    worst_r = std::max(worst_r, std::abs(fd_w_r - prof.w_r[j]) / mesh.h_r[j]);
    const double fd_w_rr =
        (prof.w_r[j + 1] - prof.w_r[j - 1]) / (2.0 * dsig) / drds;
    worst_rr = std::max(worst_rr,
                        std::abs(fd_w_rr - prof.w_rr[j]) / mesh.h_rr[j]);
  }
  CHECK(worst_r < 1e-6);
  CHECK(worst_rr < 1e-5);
}

TEST_CASE("residual of the zero profile follows the E(0) shape") {
  OdeParams prm(2, 0.0);
  auto mesh = make_mesh(2, 0.0, 0.1, 1024);
  RadialProfile zero(mesh);
  const double res = ode_residual(zero);
  CHECK(res > 0.0);
  auto E0 = error_values(zero);
  double supE = 0.0;
  for (double e : E0) supE = std::max(supE, std::abs(e));
  CHECK(res <= 1.1 * supE);
  CHECK(res >= 0.5 * supE);
}

TEST_CASE("residual responds linearly to model-profile perturbations") {
  auto res = solve_profile(OdeParams(2, 0.0), 0.25);
  const double r0 = ode_residual(res.profile);
  const double r4 = ode_residual(shift_by_model(res.profile, 1e-4));
  const double r5 = ode_residual(shift_by_model(res.profile, 1e-5));
  CHECK(r4 > 100.0 * r0);
  CHECK(r4 / r5 == doctest::Approx(10.0).epsilon(0.25));
}

TEST_CASE("power-mean inequality holds on samples") {
  CHECK(jensen_check(2.0, 2.0, 5.0));
  CHECK(jensen_check(3.0, 1.0, 1.0));
  CHECK(jensen_check(2.0, 1.0, 3.0));  // 7 <= 15
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ulog(-3.0, 3.0), uq(-3.0, 3.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = std::pow(10.0, ulog(rng));
    const double b = std::pow(10.0, ulog(rng));
    CHECK(jensen_check(a, b, uq(rng)));
  }
}

TEST_CASE("empirical estimate constants are finite and mesh stable") {
  OdeParams prm(2, 0.0);  // m = 1, delta = 1
  auto fits = estimate_constant_fits(prm, 0.25, 1024);
  CHECK(fits.C1 > 0.0);
  CHECK(std::isfinite(fits.C2));
  CHECK(fits.C3 == doctest::Approx(1.0).epsilon(1e-4));

  // C1 sup sits at the right endpoint for this family
  auto mesh = make_mesh(2, 0.0, 0.25, 1024);
  RadialProfile zero(mesh);
  auto E0 = error_values(zero);
  CHECK(fits.C1 ==
        doctest::Approx(std::abs(E0.back()) / 0.25).epsilon(1e-6));

  auto fine = estimate_constant_fits(prm, 0.25, 2048);
  CHECK(std::abs(fine.C1 - fits.C1) <= 0.05 * fits.C1);
  CHECK(std::abs(fine.C2 - fits.C2) <= 0.05 * fits.C2);
  CHECK(std::abs(fine.C3 - fits.C3) <= 0.05 * fits.C3);

  // closed form of the operator output for g = r^delta at m = 1
  std::vector<double> g(mesh->size());
  for (int j = 0; j < mesh->size(); ++j) g[j] = mesh->r[j];
  auto hat = detail::apply_step_operator(*mesh, g);
  const double r_end = mesh->r.back();
  CHECK(hat.w.back() ==
        doctest::Approx(r_end * r_end * r_end / 6.0).epsilon(1e-6));
}
