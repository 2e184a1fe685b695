#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"
#include "qns/timeloop.hpp"

using namespace qns;

namespace {

State acoustic(int n, double amp = 0.1) {
  const Grid g = Grid::cube(1, n);
  return make_state(ScalarField::from_function(g, [amp](double x, double, double) { return 1.0 + amp * std::sin(x); }),
                    VectorField(g));
}

State wavy(int n) {
  const Grid g = Grid::cube(1, n);
  VectorField u(g);
  u[0] = ScalarField::from_function(g, [](double x, double, double) { return 0.5 * std::sin(x); });
  return make_state(ScalarField::from_function(g, [](double x, double, double) { return 1.0 + 0.1 * std::cos(x); }),
                    u);
}

IntegratorConfig fixed(double dt, double t_end, Formulation f = Formulation::ApproxU, Scheme s = Scheme::Imex) {
  IntegratorConfig c;
  c.formulation = f;
  c.scheme = s;
  c.dt_init = c.dt_min = c.dt_max = dt;
  c.t_end = t_end;
  return c;
}

QnsParams desk() {
  QnsParams p;
  p.nu = 1.0;
  p.kappa = 1.0 / 11.0;
  return p;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("zero right-hand side leaves the state unchanged") {
  const State s = wavy(32);
  const RhsFn zero = [](const State& x) {
    Rhs r;
    r.drho = ScalarField(x.grid());
    r.dvel = VectorField(x.grid());
    return r;
  };
  for (auto scheme : {Scheme::Rk4, Scheme::Imex}) {
    const State n = step(s, zero, LinearPart{}, scheme, 0.1, 0.0);
    CHECK((n.rho - s.rho).max_abs() == 0.0);
    CHECK((n.vel - s.vel).max_abs() == 0.0);
    CHECK(n.time == doctest::Approx(0.1));
  }
}

TEST_CASE("rk4 local error on exponential decay is fifth order") {
  const State s = wavy(16);
  const RhsFn decay = [](const State& x) {
    Rhs r;
    r.drho = -1.0 * x.rho;
    r.dvel = -1.0 * x.vel;
    return r;
  };
  auto err = [&](double dt) {
    const State n = step(s, decay, LinearPart{}, Scheme::Rk4, dt, 0.0);
    return (n.rho - std::exp(-dt) * s.rho).max_abs();
  };
  const double e1 = err(0.2), e2 = err(0.1);
  CHECK(order(e1, e2) > 4.7);
}

TEST_CASE("imex on pure linear diffusion converges at second order") {
  const Grid g = Grid::cube(1, 32);
  LinearPart lin;
  lin.rho_diffusion = 0.5;
  lin.alpha = 0.3;
  lin.beta = 0.2;
  VectorField u(g);
  u[0] = ScalarField::from_function(g, [](double x, double, double) { return std::sin(3 * x); });
  const State s0 = make_state(
      ScalarField::from_function(g, [](double x, double, double) { return 2.0 + std::cos(2 * x); }), u);
  const RhsFn rhs = [&](const State& x) {
    Rhs r;
    r.drho = lin.rho_diffusion * laplacian(x.rho);
    r.dvel = VectorField(g);
    r.dvel[0] = (lin.alpha + lin.beta) * laplacian(x.vel[0]);
    return r;
  };
  auto err = [&](int steps) {
    State s = s0;
    const double dt = 0.5 / steps;
    for (int i = 0; i < steps; ++i) s = step(s, rhs, lin, Scheme::Imex, dt, 0.0);
    const double t = s.time;
    const auto exact = ScalarField::from_function(
        g, [t](double x, double, double) { return 2.0 + std::exp(-0.5 * 4 * t) * std::cos(2 * x); });
    const auto exact_u = ScalarField::from_function(
        g, [t](double x, double, double) { return std::exp(-0.5 * 9 * t) * std::sin(3 * x); });
    return std::max((s.rho - exact).max_abs(), (s.vel[0] - exact_u).max_abs());
  };
  const double e1 = err(10), e2 = err(20), e3 = err(40);
  CHECK(order(e1, e2) > 1.8);
  CHECK(order(e2, e3) > 1.8);
  // L-stable: an enormous step stays bounded
  const State big = step(s0, rhs, lin, Scheme::Imex, 1e6, 0.0);
  CHECK(big.vel.max_abs() < 1.0);
}

TEST_CASE("imex and rk4 agree on a smooth run") {
  const QnsParams p = desk();
  const State s = wavy(64);
  const Trajectory a = integrate(s, p, fixed(1e-3, 0.1, Formulation::ApproxU, Scheme::Imex));
  const Trajectory b = integrate(s, p, fixed(1e-3, 0.1, Formulation::ApproxU, Scheme::Rk4));
  REQUIRE(a.status == RunStatus::Completed);
  REQUIRE(b.status == RunStatus::Completed);
  CHECK(l2_norm(a.final_state.rho - b.final_state.rho) < 1e-5);
  CHECK(l2_norm(a.final_state.vel - b.final_state.vel) < 1e-5);
  CHECK(a.records.size() == 101);
}

TEST_CASE("uniform rest is steady and monitors stay constant") {
  const Grid g = Grid::cube(2, 16);
  const State s = make_state(ScalarField(g, 1.0), VectorField(g));
  IntegratorConfig c = fixed(0.01, 0.2, Formulation::Target);
  c.monitor_every = 5;
  const Trajectory t = integrate(s, desk(), c);
  REQUIRE(t.status == RunStatus::Completed);
  CHECK(t.records.size() == 5);
  for (const auto& r : t.records) {
    CHECK(r.mass == doctest::Approx(t.records[0].mass).epsilon(1e-14));
    CHECK(r.energy == doctest::Approx(t.records[0].energy).epsilon(1e-14));
    CHECK(r.rho_min == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.all_finite());
  }
}

TEST_CASE("target runs conserve mass") {
  const Trajectory t = integrate(wavy(64), desk(), fixed(2e-3, 0.2, Formulation::Target));
  REQUIRE(t.status == RunStatus::Completed);
  for (const auto& r : t.records) CHECK(std::abs(r.mass - t.records[0].mass) <= 1e-12 * t.records[0].mass);
  CHECK(t.max_mass_balance_residual() < 1e-10);
  CHECK(t.accumulated.at("nu_rho_Du2") > 0.0);
}

TEST_CASE("mass balance residual is second order in dt") {
  QnsParams p = desk();
  p.eps = 1e-2;
  std::vector<double> res;
  for (double dt : {0.02, 0.01, 0.005}) {
    const Trajectory t = integrate(acoustic(64, 0.3), p, fixed(dt, 0.2));
    REQUIRE(t.status == RunStatus::Completed);
    res.push_back(t.max_mass_balance_residual());
  }
  CHECK(order(res[0], res[1]) > 1.7);
  CHECK(order(res[1], res[2]) > 1.7);
}

TEST_CASE("energy budget residual is second order in dt") {
  QnsParams p;
  p.nu = 0.2;
  p.kappa = 0.0;
  p.eps = 0.0;
  std::vector<double> res;
  for (double dt : {0.02, 0.01, 0.005}) {
    const Trajectory t = integrate(wavy(64), p, fixed(dt, 0.2));
    REQUIRE(t.status == RunStatus::Completed);
    res.push_back(energy_budget(t, p).max_abs_residual);
  }
  CHECK(order(res[0], res[1]) > 1.7);
  CHECK(order(res[1], res[2]) > 1.7);
  CHECK(res[2] < 1e-3);
}

TEST_CASE("energy budget with capillarity and regularization") {
  QnsParams p = desk();
  p.eps = 1e-3;
  p.r0 = 0.1;
  p.r1 = 0.1;
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3}) {
    const Trajectory t = integrate(wavy(64), p, fixed(dt, 0.08));
    REQUIRE(t.status == RunStatus::Completed);
    res.push_back(energy_budget(t, p).max_abs_residual);
  }
  CHECK(order(res[0], res[1]) > 1.6);
}

TEST_CASE("approx-u and approx-w runs agree") {
  const QnsParams p = desk();
  const EquivalenceReport r = equivalence_run(wavy(128), p, fixed(1e-3, 0.05));
  REQUIRE(r.ok());
  CHECK(r.samples == 51);
  CHECK(r.max_rho_l2 < 1e-5);
  CHECK(r.max_u_l2 < 1e-5);

  QnsParams q = p;
  q.kappa = 0.0;
  q.strict_mode = false;
  const EquivalenceReport z = equivalence_run(wavy(64), q, fixed(1e-3, 0.02));
  CHECK(z.max_rho_l2 < 1e-10);
  CHECK(z.max_u_l2 < 1e-10);
}

TEST_CASE("weak residual shrinks with the time step") {
  QnsParams p = desk();
  p.eps = 0.0;
  std::vector<double> res;
  TestFunctionSpec phi;
  phi.phase = 0.4;
  for (double dt : {0.02, 0.01}) {
    const Trajectory t = integrate(wavy(64), p, fixed(dt, 0.2, Formulation::Target));
    REQUIRE(t.status == RunStatus::Completed);
    res.push_back(weak_residual(t.snapshots, phi, p));
  }
  CHECK(res[1] < res[0]);
  CHECK(order(res[0], res[1]) > 1.5);
}

TEST_CASE("runs are bit reproducible") {
  QnsParams p = desk();
  p.r0 = 0.2;
  const Trajectory a = integrate(wavy(32), p, fixed(5e-3, 0.05));
  const Trajectory b = integrate(wavy(32), p, fixed(5e-3, 0.05));
  std::ostringstream sa, sb;
  write_monitor_csv(sa, a.records);
  write_monitor_csv(sb, b.records);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind(monitor_csv_header(), 0) == 0);
}

TEST_CASE("positivity guard and step underflow") {
  const State s = wavy(16);
  const RhsFn drain = [](const State& x) {
    Rhs r;
    r.drho = ScalarField(x.grid(), -10.0);
    r.dvel = VectorField(x.grid());
    return r;
  };
  CHECK_THROWS_AS(step(s, drain, LinearPart{}, Scheme::Rk4, 1.0, 0.0), PositivityFailure);

  QnsParams p = desk();
  p.eps = 0.0;
  const Trajectory t = integrate(acoustic(32, 0.9), p, fixed(0.5, 5.0, Formulation::Target, Scheme::Rk4));
  CHECK(t.status == RunStatus::PositivityFailure);
  CHECK(!t.message.empty());

  IntegratorConfig c;
  c.dt_min = 0.5;
  c.dt_init = 0.5;
  c.dt_max = 1.0;
  c.t_end = 1.0;
  const Trajectory u = integrate(wavy(64), desk(), c);
  CHECK(u.status == RunStatus::StepUnderflow);
  CHECK(u.steps == 0);
}

TEST_CASE("adaptive steps respect the CFL estimate") {
  IntegratorConfig c;
  c.dt_init = 1e-3;
  c.dt_min = 1e-8;
  c.dt_max = 0.05;
  c.t_end = 0.05;
  const QnsParams p = desk();
  const State s = wavy(64);
  const Trajectory t = integrate(s, p, c);
  REQUIRE(t.status == RunStatus::Completed);
  CHECK(t.final_time == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(cfl_step(s, p, c) < 0.05);
  IntegratorConfig r = c;
  r.scheme = Scheme::Rk4;
  CHECK(cfl_step(s, p, r) < cfl_step(s, p, c));
}

TEST_CASE("integrator config validation") {
  IntegratorConfig c;
  c.monitor_every = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.monitor_every = 1;
  c.dt_init = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.dt_init = 1e-3;
  c.positivity_floor = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_scheme("rk4-explicit") == Scheme::Rk4);
  CHECK(std::string(to_string(Scheme::Rk4)) == "rk4-explicit");
  CHECK_THROWS_AS(parse_scheme("euler"), ConfigError);
  QnsParams bad = desk();
  bad.kappa = 0.5;
  CHECK_THROWS_AS(integrate(wavy(16), bad, fixed(1e-3, 1e-3)), AdmissibilityError);
}
