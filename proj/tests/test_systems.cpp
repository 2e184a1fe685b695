#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"
#include "qns/generators.hpp"
#include "qns/systems.hpp"

using namespace qns;

namespace {

double rel_vec(const VectorField& a, const VectorField& b) { return l2_norm(a - b) / std::max(l2_norm(b), 1e-300); }

State random_state(int dim, int n, std::uint64_t seed, double amp = 0.3) {
  const Grid g = Grid::cube(dim, n);
  return make_state(random_smooth_positive(g, seed, 2, 1.0, amp), random_smooth_vector(g, seed + 31, 2, amp));
}

QnsParams full_params() {
  QnsParams p;
  p.nu = 1.0;
  p.kappa = 1.0 / 11.0;
  p.r0 = 0.3;
  p.r1 = 0.2;
  p.eps = 1e-3;
  p.p0 = 4.0;
  return p;
}

}  // namespace

TEST_CASE("target: steady constant state") {
  const Grid g = Grid::cube(2, 16);
  const State s = make_state(ScalarField(g, 1.0), VectorField(g));
  const Rhs r = rhs_target(s, full_params());
  CHECK(r.drho.max_abs() < 1e-15);
  CHECK(r.dvel.max_abs() < 1e-15);
  CHECK(r.formulation == Formulation::Target);
}

TEST_CASE("target: damping only") {
  // shear profile: no transport, no self-advection
  const Grid g = Grid::cube(2, 32);
  QnsParams p;
  p.nu = 0.0;
  p.kappa = 0.0;
  p.r0 = 1.0;
  VectorField u(g);
  u[0] = ScalarField::from_function(g, [](double, double y, double) { return std::sin(y); });
  const Rhs r = rhs_target(make_state(ScalarField(g, 1.0), u), p);
  CHECK((r.dvel[0] + u[0]).max_abs() < 1e-14);
  CHECK(r.dvel[1].max_abs() < 1e-14);
  CHECK(r.drho.max_abs() < 1e-14);
}

TEST_CASE("momentum breakdown sums to the assembled rhs") {
  for (auto f : {Formulation::Target, Formulation::ApproxU, Formulation::ApproxW}) {
    for (int dim = 1; dim <= 2; ++dim) {
      CAPTURE(to_string(f));
      CAPTURE(dim);
      const QnsParams p = full_params();
      State s = random_state(dim, dim == 1 ? 64 : 32, 3);
      if (f == Formulation::ApproxW) s = to_w(s, p);
      RhsOptions opts;
      opts.dealias = false;
      opts.breakdown = true;
      const Rhs r = evaluate_rhs(f, s, p, opts);
      const VectorField sum = r.breakdown.momentum_sum();
      const VectorField assembled = s.rho * r.dvel;
      CHECK(rel_vec(sum, assembled) < 1e-10);
      CHECK((r.breakdown.mass_sum() - r.drho).max_abs() < 1e-10 * (1.0 + r.drho.max_abs()));
    }
  }
}

TEST_CASE("eps = 0 reduces approx-u to the target system") {
  QnsParams p = full_params();
  p.eps = 0.0;
  for (int dim = 1; dim <= 3; ++dim)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const State s = random_state(dim, dim == 3 ? 16 : 32, seed);
      const Rhs a = rhs_approx_u(s, p);
      const Rhs t = rhs_target(s, p);
      CHECK((a.drho - t.drho).max_abs() < 1e-12);
      for (int i = 0; i < dim; ++i) CHECK((a.dvel[i] - t.dvel[i]).max_abs() < 1e-12);
    }
}

TEST_CASE("approx-u constant state source") {
  const Grid g = Grid::cube(1, 16);
  QnsParams p = full_params();
  p.eps = 0.01;
  const Rhs r = rhs_approx_u(make_state(ScalarField(g, 1.0), VectorField(g)), p);
  CHECK((r.drho - ScalarField(g, 0.01)).max_abs() < 1e-15);
  CHECK(r.dvel.max_abs() < 1e-15);
}

TEST_CASE("approx-u instantaneous mass balance") {
  QnsParams p = full_params();
  p.eps = 0.01;
  for (int dim = 1; dim <= 2; ++dim)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const State s = random_state(dim, dim == 1 ? 64 : 32, seed, 0.5);
      const Rhs r = rhs_approx_u(s, p);
      const ScalarField gv2 = norm2(grad(sqrt(s.rho)));
      const double expect = -p.eps * integrate(gv2 * gv2) + p.eps * integrate(pow(s.rho, -p.p0));
      CHECK(std::abs(integrate(r.drho) - expect) <= 1e-10 * std::abs(expect));
    }
}

TEST_CASE("approx-w degenerate and steady cases") {
  const Grid g = Grid::cube(1, 32);
  QnsParams p = full_params();
  p.eps = 0.0;
  const Rhs z = rhs_approx_w(make_state(ScalarField(g, 1.0), VectorField(g), VelocityForm::W), p);
  CHECK(z.drho.max_abs() < 1e-14);
  CHECK(z.dvel.max_abs() < 1e-14);

  p.kappa = 0.0;
  p.eps = 0.0;
  const State s = random_state(2, 32, 9);
  State w = s;
  w.form = VelocityForm::W;
  const Rhs a = rhs_approx_w(w, p);
  const Rhs t = rhs_target(s, p);
  CHECK((a.drho - t.drho).max_abs() < 1e-12);
  CHECK(rel_vec(a.dvel, t.dvel) < 1e-12);
  CHECK_THROWS(rhs_approx_w(s, p));
}

TEST_CASE("approx-w matches approx-u under the change of variables") {
  const QnsParams p = full_params();
  for (int dim = 1; dim <= 2; ++dim)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      CAPTURE(dim);
      CAPTURE(seed);
      const State s = random_state(dim, dim == 1 ? 128 : 64, seed);
      RhsOptions raw;
      raw.dealias = false;
      const Rhs ru = rhs_approx_u(s, p, raw);
      const State w = to_w(s, p);
      const auto [drho, du] = implied_u_rates(w, rhs_approx_w(w, p, raw), p);
      CHECK((drho - ru.drho).max_abs() < 1e-6 * ru.drho.max_abs());
      CHECK(rel_vec(du, ru.dvel) < 1e-6);
    }
}

TEST_CASE("w-form rhs grows at most quadratically in the density wavenumber") {
  // A third-order term in rho would make the response grow like k^3.
  const Grid g = Grid::cube(1, 256);
  QnsParams p = full_params();
  p.eps = 0.0;
  p.r0 = p.r1 = 0.0;
  const auto base = ScalarField::from_function(g, [](double x, double, double) { return 1.0 + 0.2 * std::sin(x); });
  VectorField w(g);
  w[0] = ScalarField::from_function(g, [](double x, double, double) { return 0.3 * std::cos(x); });
  RhsOptions raw;
  raw.dealias = false;
  auto response = [&](Formulation f, int k) {
    const auto pert = ScalarField::from_function(g, [k](double x, double, double) { return 1e-6 * std::sin(k * x); });
    const State s0 = make_state(base, w, velocity_form(f));
    const State s1 = make_state(base + pert, w, velocity_form(f));
    return (evaluate_rhs(f, s1, p, raw).dvel[0] - evaluate_rhs(f, s0, p, raw).dvel[0]).max_abs();
  };
  const double w_ratio = response(Formulation::ApproxW, 64) / response(Formulation::ApproxW, 32);
  const double u_ratio = response(Formulation::ApproxU, 64) / response(Formulation::ApproxU, 32);
  CHECK(w_ratio < 4.5);
  CHECK(u_ratio > 7.0);
}

TEST_CASE("vacuum rejected") {
  const Grid g = Grid::cube(1, 16);
  ScalarField rho(g, 1.0);
  rho[2] = 0.0;
  State s{rho, VectorField(g), VelocityForm::U, 0.0};
  CHECK_THROWS_AS(rhs_target(s, full_params()), VacuumError);
  CHECK_THROWS_AS(rhs_approx_u(s, full_params()), VacuumError);
}

TEST_CASE("weak residual of the constant steady state and linearity") {
  const Grid g = Grid::cube(2, 16);
  QnsParams p = full_params();
  p.r0 = 0.0;
  std::vector<State> traj;
  for (int n = 0; n <= 10; ++n) traj.push_back(make_state(ScalarField(g, 1.0), VectorField(g), VelocityForm::U, 0.1 * n));
  for (int c = 0; c < 2; ++c) {
    TestFunctionSpec phi;
    phi.mode = {1, 2, 0};
    phi.component = c;
    phi.phase = 0.3;
    CHECK(weak_residual(traj, phi, p) < 1e-10);
  }

  std::vector<State> moving;
  const State s = random_state(1, 32, 4);
  for (int n = 0; n <= 4; ++n) {
    State t = s;
    t.time = 0.05 * n;
    moving.push_back(t);
  }
  TestFunctionSpec phi;
  const double r1 = weak_residual(moving, phi, p);
  phi.amplitude = 2.0;
  CHECK(weak_residual(moving, phi, p) == doctest::Approx(2.0 * r1).epsilon(1e-12));
  CHECK(r1 > 0.0);
  CHECK_THROWS(weak_residual({s}, phi, p));
}
