#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qns/calculus.hpp"
#include "qns/functionals.hpp"
#include "qns/generators.hpp"

using namespace qns;
using std::numbers::e;
using std::numbers::pi;

namespace {

QnsParams quiet_params() {
  QnsParams p;
  p.kappa = 0.0;
  p.eps = 0.0;
  p.r0 = p.r1 = 0.0;
  return p;
}

State smooth_1d(int n, double uamp) {
  const Grid g = Grid::cube(1, n);
  const auto rho = ScalarField::from_function(g, [](double x, double, double) {
    const double v = 1.0 + 0.3 * std::sin(x);
    return v * v;
  });
  VectorField u(g);
  u[0] = ScalarField::from_function(g, [uamp](double x, double, double) { return uamp * std::cos(x); });
  return make_state(rho, u);
}

}  // namespace

TEST_CASE("FunctionalReport pass rules") {
  CHECK(FunctionalReport::inequality("a", 1.0, 1.0).passed);
  CHECK(FunctionalReport::inequality("a", 1.0 + 1e-11, 1.0).passed);
  CHECK_FALSE(FunctionalReport::inequality("a", 1.0 + 1e-9, 1.0).passed);
  CHECK(FunctionalReport::inequality("a", 0.0, 0.0).passed);
  CHECK(FunctionalReport::inequality("a", 1e-13, 0.0).passed);
  CHECK_FALSE(FunctionalReport::inequality("a", NAN, 1.0).passed);
  const auto id = FunctionalReport::identity("b", 1.0, 1.0 + 1e-9, 1e-8);
  CHECK(id.passed);
  CHECK(id.margin == doctest::Approx(1e-9));
  CHECK_FALSE(FunctionalReport::identity("b", 1.0, 1.1, 1e-8).passed);
}

TEST_CASE("energy examples") {
  QnsParams p = quiet_params();
  const Grid g3 = Grid::cube(3, 8);
  const State rest = make_state(ScalarField(g3, 1.0), VectorField(g3));
  CHECK(energy(rest, p) == doctest::Approx(2.0 * std::pow(2 * pi, 3)).epsilon(1e-13));
  CHECK(energy(rest, p) == doctest::Approx(496.1004).epsilon(1e-7));

  p.kappa = 1.0 / 11.0;
  const auto parts = energy_parts(rest, p);
  CHECK(parts.gradient == 0.0);
  CHECK(parts.eps_quartic == 0.0);

  SUBCASE("kappa = eps = 0 reduces to rho|u|^2 + rho + rho^gamma") {
    const State s = smooth_1d(64, 0.1);
    const QnsParams q = quiet_params();
    const double direct = integrate(s.rho * norm2(s.vel) + s.rho + pow(s.rho, q.gamma));
    CHECK(energy(s, q) == doctest::Approx(direct).epsilon(1e-15));
  }
}

TEST_CASE("functionals agree with dense refinement") {
  QnsParams p;
  p.eps = 1e-3;
  // log_- has a kink where rho crosses 1, so r0 stays 0 here
  p.r0 = 0.0;
  const State coarse = smooth_1d(64, 0.1);
  const State dense = smooth_1d(1024, 0.1);
  CHECK(std::abs(energy(coarse, p) - energy(dense, p)) < 1e-10);
  CHECK(std::abs(bd_entropy(coarse, p) - bd_entropy(dense, p)) < 1e-10);
  const State mvc = smooth_1d(64, 1.0);
  const State mvd = smooth_1d(1024, 1.0);
  CHECK(std::abs(mv_functional(mvc, p) - mv_functional(mvd, p)) < 1e-10);
  // doubling n
  const State c2 = smooth_1d(128, 0.1);
  CHECK(std::abs(energy(coarse, p) - energy(c2, p)) < 1e-10);
  CHECK(std::abs(bd_entropy(coarse, p) - bd_entropy(c2, p)) < 1e-10);
  CHECK(std::abs(mv_functional(coarse, p) - mv_functional(c2, p)) < 1e-10);
}

TEST_CASE("bd_entropy examples") {
  QnsParams p = quiet_params();
  const Grid g = Grid::cube(1, 32);
  CHECK(bd_entropy(make_state(ScalarField(g, 1.0), VectorField(g)), p) == 0.0);
  p.r0 = 1.0;
  CHECK(bd_entropy(make_state(ScalarField(g, 1.0 / e), VectorField(g)), p) ==
        doctest::Approx(2 * pi).epsilon(1e-14));
  // rho >= 1: the log term contributes nothing
  const auto rho = random_smooth_positive(g, 2, 3, 1.0);
  const State s = make_state(rho, VectorField(g));
  QnsParams p0 = p;
  p0.r0 = 0.0;
  CHECK(bd_entropy(s, p) == bd_entropy(s, p0));
}

TEST_CASE("mv_functional examples") {
  const QnsParams p = quiet_params();
  const Grid g = Grid::cube(1, 32);
  CHECK(mv_functional(make_state(ScalarField(g, 1.0), VectorField(g)), p) ==
        doctest::Approx(2 * pi * e).epsilon(1e-14));
  CHECK(mv_functional(make_state(ScalarField(g, 1.0), VectorField(g)), p) == doctest::Approx(17.0795).epsilon(1e-5));
  const auto rho = random_smooth_positive(g, 4, 3, 0.2);
  CHECK(mv_functional(make_state(rho, VectorField(g)), p) == doctest::Approx(e * integrate(rho)).epsilon(1e-14));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const State s = make_state(random_smooth_positive(g, seed, 3, 0.2), random_smooth_vector(g, seed, 3));
    CHECK(mv_functional(s, p) >= e * integrate(s.rho));
  }
}

TEST_CASE("energy_dissipation examples") {
  QnsParams p = quiet_params();
  const Grid g = Grid::cube(1, 32);
  const auto zero = energy_dissipation(make_state(ScalarField(g, 1.0), VectorField(g)), p);
  CHECK(zero.size() == dissipation_vocabulary().size());
  for (const auto& [k, v] : zero) {
    CAPTURE(k);
    CHECK(v == 0.0);
  }

  VectorField u(g);
  u[0] = ScalarField::from_function(g, [](double x, double, double) { return std::sin(x); });
  const auto d = energy_dissipation(make_state(ScalarField(g, 1.0), u), p);
  CHECK(d.at("nu_rho_Du2") == doctest::Approx(pi).epsilon(1e-13));

  for (int dim = 1; dim <= 3; ++dim) {
    const Grid gd = Grid::cube(dim, dim == 1 ? 128 : dim == 2 ? 64 : 32);
    const auto rho = random_smooth_positive(gd, 3, 2, 1.0, 0.3);
    const auto vel = random_smooth_vector(gd, 4, 2);
    const auto dd = energy_dissipation(make_state(rho, vel), p);
    const double oracle = integrate(rho * norm2(grad_vec(vel)));
    CAPTURE(dim);
    CHECK(std::abs(dd.at("bd_velocity_grad2") - oracle) < (dim == 3 ? 1e-6 : 1e-10) * oracle);
  }

  SUBCASE("eps terms are nonnegative and scale with eps") {
    QnsParams q;
    q.eps = 1e-3;
    const State s = make_state(random_smooth_positive(g, 5, 3, 0.5, 0.5), random_smooth_vector(g, 6, 3));
    const auto a = energy_dissipation(s, q);
    for (const auto& [k, v] : a) {
      CAPTURE(k);
      CHECK(v >= 0.0);
    }
    q.eps = 2e-3;
    const auto b = energy_dissipation(s, q);
    CHECK(b.at("eps_gradv4") == doctest::Approx(2.0 * a.at("eps_gradv4")).epsilon(1e-14));
  }
}

TEST_CASE("check_jungel") {
  const Grid g = Grid::cube(1, 256);
  for (const auto& r : check_jungel(ScalarField(g, 2.0))) {
    CHECK(r.lhs == doctest::Approx(0.0));
    CHECK(r.passed);
  }
  const auto rho = ScalarField::from_function(g, [](double x, double, double) {
    const double v = 1.0 + 0.3 * std::sin(x);
    return v * v;
  });
  for (const auto& r : check_jungel(rho)) {
    CAPTURE(r.name);
    CHECK(r.passed);
    CHECK(r.margin > 0.0);
  }
  const Grid g128 = Grid::cube(1, 128);
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    for (const auto& r : check_jungel(random_smooth_positive(g128, seed, 4, 0.1)))
      if (!r.passed) ++failures;
  CHECK(failures == 0);
}

TEST_CASE("check_grad6") {
  const Grid g = Grid::cube(1, 128);
  CHECK(check_grad6(ScalarField(g, 1.5)).passed);
  const auto v = ScalarField::from_function(g, [](double x, double, double) { return 1.0 + 0.3 * std::sin(x); });
  const auto r = check_grad6(v);
  CHECK(r.passed);
  CHECK(r.margin > 0.0);
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    if (!check_grad6(random_smooth_positive(g, seed, 4, 0.1)).passed) ++failures;
  CHECK(failures == 0);
}

TEST_CASE("check_div_vs_D") {
  const Grid g2 = Grid::cube(2, 32);
  VectorField shear(g2);
  shear[0] = ScalarField::from_function(g2, [](double, double y, double) { return std::sin(y); });
  const auto r0 = check_div_vs_D(ScalarField(g2, 1.0), shear);
  CHECK(std::abs(r0.lhs) < 1e-20);
  CHECK(r0.passed);

  const Grid g1 = Grid::cube(1, 32);
  VectorField u(g1);
  u[0] = ScalarField::from_function(g1, [](double x, double, double) { return std::sin(x); });
  const auto r1 = check_div_vs_D(ScalarField(g1, 1.0), u);
  CHECK(r1.lhs == doctest::Approx(pi).epsilon(1e-13));
  CHECK(r1.rhs == doctest::Approx(3 * pi).epsilon(1e-13));

  for (int dim = 1; dim <= 3; ++dim) {
    const Grid gd = Grid::cube(dim, dim == 3 ? 16 : 32);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      CHECK(check_div_vs_D(random_smooth_positive(gd, seed, 2, 0.1), random_smooth_vector(gd, seed + 50, 2)).passed);
  }
}

TEST_CASE("check_flux_identity") {
  const Grid g = Grid::cube(1, 128);
  const auto c = check_flux_identity(ScalarField(g, 3.0), 0.0);
  CHECK(c.lhs == 0.0);
  CHECK(c.passed);
  const auto v = ScalarField::from_function(g, [](double x, double, double) { return 1.0 + 0.3 * std::sin(x); });
  const auto r = check_flux_identity(v, 0.0);
  CHECK(r.relative_gap() < 1e-9);
  CHECK(r.passed);
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid gd = Grid::cube(dim, dim == 1 ? 128 : dim == 2 ? 64 : 32);
    for (double rr : {0.0, 2.0}) {
      CAPTURE(dim);
      CAPTURE(rr);
      const auto rep = check_flux_identity(random_smooth(gd, 11, 3), rr);
      CHECK(rep.passed);
      CHECK(rep.lhs > 0.0);
    }
  }
}

TEST_CASE("check_grad_sqrtrho_u") {
  const Grid g = Grid::cube(1, 64);
  const auto rho = random_smooth_positive(g, 1, 3, 0.5, 0.5);
  const auto r0 = check_grad_sqrtrho_u(rho, VectorField(g));
  CHECK(r0.lhs == 0.0);
  const auto u = random_smooth_vector(g, 2, 3);
  CHECK(check_grad_sqrtrho_u(ScalarField(g, 1.0), u).lhs < 1e-14);
  for (int dim = 1; dim <= 2; ++dim) {
    const Grid gd = Grid::cube(dim, dim == 1 ? 128 : 64);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      CHECK(check_grad_sqrtrho_u(random_smooth_positive(gd, seed, 2, 1.0, 0.3), random_smooth_vector(gd, seed + 7, 2)).passed);
  }
}

TEST_CASE("monitor record and csv") {
  QnsParams p;
  const State s = smooth_1d(32, 0.1);
  const auto rec = make_monitor_record(s, p);
  CHECK(rec.rho_min <= rec.rho_max);
  CHECK(rec.mass > 0.0);
  CHECK(rec.all_finite());
  const std::string header = monitor_csv_header();
  CHECK(header.rfind("time,mass,energy,bd_entropy,mv,rho_min,rho_max,mass_balance_residual,nu_rho_Du2", 0) == 0);
  const std::string row = monitor_csv_row(rec);
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}
