#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qns/calculus.hpp"
#include "qns/generators.hpp"
#include "qns/snapshot.hpp"

using namespace qns;
using std::numbers::pi;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("grid invariants") {
  const Grid g(2, {16, 8, 1}, {2.0, 3.0, 1.0});
  CHECK(g.size() == 128);
  CHECK(g.spacing(0) * g.n(0) == 2.0);
  CHECK(g.spacing(1) * g.n(1) == 3.0);
  CHECK(g.volume() == doctest::Approx(6.0));
  CHECK_THROWS_AS(Grid(1, {7, 1, 1}, {1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, {6, 1, 1}, {1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(4, {8, 8, 8}, {1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, {8, 1, 1}, {-1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("field containers reject mismatched sizes and grids") {
  const Grid g = Grid::cube(1, 8);
  CHECK_THROWS(ScalarField(g, std::vector<double>(7, 0.0)));
  const ScalarField a(g, 1.0);
  const ScalarField b(Grid::cube(1, 16), 1.0);
  CHECK_THROWS_AS(a + b, GridMismatch);
}

TEST_CASE("grad of a constant is zero") {
  const Grid g = Grid::cube(3, 8);
  const ScalarField f(g, 3.7);
  const VectorField gf = grad(f);
  for (int a = 0; a < 3; ++a) CHECK(gf[a].max_abs() < 1e-13);
}

TEST_CASE("grad of sin(2 pi x / L) in 1D") {
  const double L = 3.0;
  const Grid g = Grid::cube(1, 64, L);
  const auto f = ScalarField::from_function(g, [L](double x, double, double) { return std::sin(2 * pi * x / L); });
  const auto exact = ScalarField::from_function(
      g, [L](double x, double, double) { return (2 * pi / L) * std::cos(2 * pi * x / L); });
  CHECK(max_diff(grad(f)[0], exact) < 1e-12);
}

TEST_CASE("grad of sin x + cos 2y in 2D") {
  const Grid g = Grid::cube(2, 32);
  const auto f = ScalarField::from_function(g, [](double x, double y, double) { return std::sin(x) + std::cos(2 * y); });
  const VectorField gf = grad(f);
  const auto ex = ScalarField::from_function(g, [](double x, double, double) { return std::cos(x); });
  const auto ey = ScalarField::from_function(g, [](double, double y, double) { return -2 * std::sin(2 * y); });
  CHECK(max_diff(gf[0], ex) < 1e-12);
  CHECK(max_diff(gf[1], ey) < 1e-12);
  // zero mean of each derivative component
  CHECK(std::abs(integrate(gf[0])) < 1e-12);
  CHECK(std::abs(integrate(gf[1])) < 1e-12);
}

TEST_CASE("div, laplacian, sym_grad closed forms") {
  SUBCASE("constant vector has zero divergence") {
    const Grid g = Grid::cube(2, 16);
    VectorField F(g, 2.5);
    CHECK(div(F).max_abs() < 1e-13);
  }
  SUBCASE("laplacian of sin x") {
    const Grid g = Grid::cube(1, 32);
    const auto f = ScalarField::from_function(g, [](double x, double, double) { return std::sin(x); });
    CHECK(max_diff(laplacian(f), -1.0 * f) < 1e-12);
  }
  SUBCASE("shear flow (sin y, 0)") {
    const Grid g = Grid::cube(2, 32);
    VectorField F(g);
    F[0] = ScalarField::from_function(g, [](double, double y, double) { return std::sin(y); });
    const TensorField D = sym_grad(F);
    const auto half_cos = ScalarField::from_function(g, [](double, double y, double) { return 0.5 * std::cos(y); });
    CHECK(D(0, 0).max_abs() < 1e-12);
    CHECK(D(1, 1).max_abs() < 1e-12);
    CHECK(max_diff(D(0, 1), half_cos) < 1e-12);
    CHECK(max_diff(D(1, 0), half_cos) < 1e-12);
    CHECK(div(F).max_abs() < 1e-12);
  }
}

TEST_CASE("integrate and lp_norm closed forms") {
  const Grid g3 = Grid::cube(3, 8);
  CHECK(integrate(ScalarField(g3, 1.0)) == doctest::Approx(std::pow(2 * pi, 3)).epsilon(1e-14));
  CHECK(integrate(ScalarField(g3, 1.0)) == doctest::Approx(248.0502).epsilon(1e-7));

  const Grid g = Grid::cube(1, 64);
  const auto s = ScalarField::from_function(g, [](double x, double, double) { return std::sin(x); });
  CHECK(std::abs(integrate(s)) < 1e-13);
  CHECK(std::abs(integrate(s * s) - pi) < 1e-12);

  CHECK(lp_norm(ScalarField(g, 2.0), 2.0) == doctest::Approx(2.0 * std::sqrt(2 * pi)).epsilon(1e-14));
  CHECK(lp_norm(s, kInfinityNorm) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(s, 0.5), std::invalid_argument);
}

TEST_CASE("random_smooth_positive") {
  const Grid g = Grid::cube(1, 64);
  SUBCASE("modes = 0 gives a constant floor + c^2") {
    const auto f = random_smooth_positive(g, 3, 0, 0.2);
    CHECK(f.max() - f.min() < 1e-15);
    CHECK(f.min() >= 0.2);
  }
  SUBCASE("deterministic per seed") {
    const auto a = random_smooth_positive(g, 11, 4, 0.1);
    const auto b = random_smooth_positive(g, 11, 4, 0.1);
    CHECK(max_diff(a, b) == 0.0);
    const auto c = random_smooth_positive(g, 12, 4, 0.1);
    CHECK(max_diff(a, c) > 0.0);
  }
  SUBCASE("floor respected") {
    const auto f = random_smooth_positive(g, 1, 4, 0.1);
    CHECK(f.min() >= 0.1);
  }
  SUBCASE("too many modes rejected") {
    CHECK_THROWS_AS(random_smooth_positive(g, 1, 22, 0.1), std::invalid_argument);
  }
}

TEST_CASE("dealias") {
  const Grid g = Grid::cube(1, 32);
  const auto low = ScalarField::from_function(g, [](double x, double, double) { return 1.0 + std::sin(3 * x) + std::cos(5 * x); });
  CHECK(max_diff(dealias(low), low) < 1e-13);
  const auto top = ScalarField::from_function(g, [](double x, double, double) { return std::cos(16 * x); });
  CHECK(dealias(top).max_abs() < 1e-13);
  const auto r = random_smooth(g, 5, 10);
  const auto once = dealias(r);
  CHECK(max_diff(dealias(once), once) < 1e-14);
  // mean is preserved
  CHECK(std::abs(integrate(once) - integrate(r)) < 1e-12);
}

TEST_CASE("calculus properties over random resolved fields") {
  for (int dim = 1; dim <= 3; ++dim) {
    const int n = dim == 3 ? 16 : 32;
    const Grid g = Grid::cube(dim, n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CAPTURE(dim);
      CAPTURE(seed);
      const auto f = random_smooth(g, seed, 4);
      const auto gfun = random_smooth(g, seed + 100, 4);
      const auto F = random_smooth_vector(g, seed + 200, 4);

      // zero mean of derivatives
      const VectorField gf = grad(f);
      for (int a = 0; a < dim; ++a) CHECK(std::abs(integrate(gf[a])) < 1e-12 * (1.0 + lp_norm(gf[a], 1.0)));

      // adjointness of grad and div
      const double lhs = integrate(gfun * div(F));
      const double rhs = -integrate(dot(grad(gfun), F));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + std::abs(rhs) + 1.0));

      // trace(sym_grad F) = div F
      CHECK(max_diff(trace(sym_grad(F)), div(F)) < 1e-12 * (1.0 + div(F).max_abs()));

      // hessian symmetric and consistent with laplacian
      const TensorField h = hessian(f);
      CHECK(h.asymmetry() < 1e-12);
      CHECK(max_diff(trace(h), laplacian(f)) < 1e-10 * (1.0 + laplacian(f).max_abs()));

      // div(grad) = laplacian
      CHECK(max_diff(div(grad(f)), laplacian(f)) < 1e-10 * (1.0 + laplacian(f).max_abs()));
    }
  }
}

TEST_CASE("finite-difference backend converges at second order") {
  auto err = [](int n) {
    const Grid g = Grid::cube(1, n);
    const auto f = ScalarField::from_function(g, [](double x, double, double) { return std::exp(std::sin(x)); });
    const auto exact = ScalarField::from_function(g, [](double x, double, double) { return std::cos(x) * std::exp(std::sin(x)); });
    return max_diff(grad(f, finite_difference())[0], exact);
  };
  const double e1 = err(32);
  const double e2 = err(64);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));

  const Grid g = Grid::cube(2, 64);
  const auto f = ScalarField::from_function(g, [](double x, double y, double) { return std::sin(x) * std::cos(y); });
  CHECK(max_diff(laplacian(f, finite_difference()), laplacian(f)) < 2e-3);
  CHECK(hessian(f, finite_difference()).asymmetry() < 1e-12);
}

TEST_CASE("snapshot round trip is exact") {
  const Grid g(2, {8, 10, 1}, {1.5, 2.0, 1.0});
  const auto f = random_smooth(g, 9, 2);
  const auto F = random_smooth_vector(g, 4, 2);
  std::stringstream ss;
  write_snapshot(ss, scalar_record("rho", 0.25, f));
  write_snapshot(ss, vector_record("u", 0.25, F));
  const auto recs = read_snapshots(ss);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].name == "rho");
  CHECK(recs[0].time == 0.25);
  CHECK(recs[0].components[0].grid() == g);
  CHECK(max_diff(recs[0].components[0], f) == 0.0);
  const VectorField G = as_vector(recs[1]);
  CHECK(max_diff(G[1], F[1]) == 0.0);

  std::stringstream bad("NOTASNAP\n");
  CHECK_THROWS(read_snapshots(bad));
}
