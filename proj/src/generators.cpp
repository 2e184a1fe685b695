#include "qns/generators.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace qns {

ScalarField random_smooth(const Grid& grid, std::uint64_t seed, int modes, double amplitude) {
  if (modes < 0) throw std::invalid_argument("random_smooth: modes must be nonnegative");
  for (int a = 0; a < grid.dim(); ++a) {
    if (3 * modes > grid.n(a)) {
      throw std::invalid_argument("random_smooth: modes=" + std::to_string(modes) +
                                  " exceeds n/3 on axis " + std::to_string(a));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const int d = grid.dim();
  std::array<int, 3> span{1, 1, 1};
  std::array<int, 3> n{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    span[a] = 2 * modes + 1;
    n[a] = grid.n(a);
  }
  const int total = span[0] * span[1] * span[2];

  // coef[(m0 * span1 + m1) * span2 + m2] multiplies exp(i k.x); draw order is m0 fastest
  using C = std::complex<double>;
  std::vector<C> coef(static_cast<std::size_t>(total));
  double weight2 = 0.0;
  for (int t = 0; t < total; ++t) {
    std::array<int, 3> m{0, 0, 0};
    int rem = t;
    for (int a = 0; a < d; ++a) {
      m[a] = rem % span[a];
      rem /= span[a];
    }
    double m2 = 0.0;
    for (int a = 0; a < d; ++a) m2 += (m[a] - modes) * (m[a] - modes);
    const double w = 1.0 / (1.0 + m2);
    const double c = normal(rng) * w;
    const double s = normal(rng) * w;
    weight2 += w * w;
    coef[static_cast<std::size_t>((m[0] * span[1] + m[1]) * span[2] + m[2])] = C(c, -s);
  }
  const double scale = amplitude / std::sqrt(weight2);

  // per-axis phase tables e[a][m * n_a + j]
  std::array<std::vector<C>, 3> e;
  for (int a = 0; a < 3; ++a) {
    e[a].resize(static_cast<std::size_t>(span[a] * n[a]));
    for (int m = 0; m < span[a]; ++m)
      for (int j = 0; j < n[a]; ++j) {
        const double k = a < d ? 2.0 * std::numbers::pi * (m - modes) / grid.length(a) : 0.0;
        const double x = a < d ? j * grid.spacing(a) : 0.0;
        e[a][static_cast<std::size_t>(m * n[a] + j)] = std::polar(1.0, k * x);
      }
  }
  auto at = [](const std::vector<C>& v, int i) { return v[static_cast<std::size_t>(i)]; };

  std::vector<C> s2(static_cast<std::size_t>(span[0] * span[1] * n[2]));
  for (int m0 = 0; m0 < span[0]; ++m0)
    for (int m1 = 0; m1 < span[1]; ++m1)
      for (int j2 = 0; j2 < n[2]; ++j2) {
        C acc = 0.0;
        for (int m2 = 0; m2 < span[2]; ++m2)
          acc += at(coef, (m0 * span[1] + m1) * span[2] + m2) * at(e[2], m2 * n[2] + j2);
        s2[static_cast<std::size_t>((m0 * span[1] + m1) * n[2] + j2)] = acc;
      }
  std::vector<C> s1(static_cast<std::size_t>(span[0] * n[1] * n[2]));
  for (int m0 = 0; m0 < span[0]; ++m0)
    for (int j1 = 0; j1 < n[1]; ++j1)
      for (int j2 = 0; j2 < n[2]; ++j2) {
        C acc = 0.0;
        for (int m1 = 0; m1 < span[1]; ++m1)
          acc += at(s2, (m0 * span[1] + m1) * n[2] + j2) * at(e[1], m1 * n[1] + j1);
        s1[static_cast<std::size_t>((m0 * n[1] + j1) * n[2] + j2)] = acc;
      }
  ScalarField out(grid);
  for (int j0 = 0; j0 < n[0]; ++j0)
    for (int j1 = 0; j1 < n[1]; ++j1)
      for (int j2 = 0; j2 < n[2]; ++j2) {
        C acc = 0.0;
        for (int m0 = 0; m0 < span[0]; ++m0)
          acc += at(s1, (m0 * n[1] + j1) * n[2] + j2) * at(e[0], m0 * n[0] + j0);
        out[static_cast<std::size_t>((j0 * n[1] + j1) * n[2] + j2)] = scale * acc.real();
      }
  return out;
}

ScalarField random_smooth_positive(const Grid& grid, std::uint64_t seed, int modes, double floor,
                                   double amplitude) {
  if (!(floor > 0.0)) throw std::invalid_argument("random_smooth_positive: floor must be > 0");
  const ScalarField s = random_smooth(grid, seed, modes, amplitude);
  return s.map([floor](double x) { return floor + x * x; });
}

VectorField random_smooth_vector(const Grid& grid, std::uint64_t seed, int modes,
                                 double amplitude) {
  std::vector<ScalarField> comps;
  for (int a = 0; a < grid.dim(); ++a) {
    comps.push_back(random_smooth(grid, seed * 7919u + 101u * static_cast<std::uint64_t>(a + 1),
                                  modes, amplitude));
  }
  return VectorField(std::move(comps));
}

}  // namespace qns
