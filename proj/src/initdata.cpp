#include "qns/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"

namespace qns {

void RawData::validate() const {
  require_same_grid(rho0.grid(), m0.grid(), "RawData");
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    const double r = rho0[i];
    if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("RawData: rho0 must be finite and nonnegative");
    for (int c = 0; c < m0.dim(); ++c) {
      const double m = m0[c][i];
      if (!std::isfinite(m)) throw std::invalid_argument("RawData: m0 must be finite");
      if (r == 0.0 && std::abs(m) > kVacuumMomentumTol)
        throw std::invalid_argument("RawData: m0 must vanish on the vacuum set");
    }
  }
}

double mollifier_floor(double eps, double sigma0) { return std::exp(4.0 * sigma0 * std::log(eps)); }

int mollifier_cutoff(const Grid& grid, double eps, double sigma0) {
  int n_min = grid.n(0);
  for (int a = 1; a < grid.dim(); ++a) n_min = std::min(n_min, grid.n(a));
  const double k = std::ceil(std::pow(eps, -sigma0));
  return static_cast<int>(std::min<double>(k, n_min / 3));
}

State mollify(const RawData& raw, double eps, const QnsParams& params) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollify: eps must be positive");
  raw.validate();
  const Grid& g = raw.rho0.grid();
  const int kc = mollifier_cutoff(g, eps, params.sigma0);
  const double floor6 = std::exp(24.0 * params.sigma0 * std::log(eps));

  const ScalarField smooth = lowpass(raw.rho0, kc).map([](double x) { return std::max(x, 0.0); });
  const ScalarField rho = smooth.map([floor6](double x) { return std::pow(std::pow(x, 6) + floor6, 1.0 / 6.0); });

  VectorField u(g);
  const ScalarField inv_sqrt = rho.map([](double x) { return 1.0 / std::sqrt(x); });
  for (int c = 0; c < g.dim(); ++c) {
    ScalarField q(g);
    for (std::size_t i = 0; i < q.size(); ++i)
      q[i] = raw.rho0[i] > 0.0 ? raw.m0[c][i] / std::sqrt(raw.rho0[i]) : 0.0;
    u[c] = inv_sqrt * lowpass(q, kc);
  }
  return make_state(rho, std::move(u));
}

RawData raw_from_state(const State& s, const QnsParams& params) {
  const VectorField u = fluid_velocity(s, params);
  return RawData{s.rho, s.rho * u};
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"uniform-rest", "acoustic-1d", "vacuum-bump-1d", "shear-wave-2d"};
  return names;
}

Scenario scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.params.nu = 1.0;
  s.params.kappa = 1.0 / 11.0;
  s.integrator.t_end = 1.0;
  s.integrator.dt_init = 1e-3;
  s.integrator.dt_min = 1e-8;
  s.integrator.dt_max = 1e-2;
  s.integrator.monitor_every = 10;
  if (name == "uniform-rest") {
    s.description = "rho = 1, u = 0";
    s.grid = Grid::cube(1, 32);
    s.params.eps = 0.0;
  } else if (name == "acoustic-1d") {
    s.description = "rho = 1 + 0.1 sin x, u = 0";
    s.grid = Grid::cube(1, 128);
  } else if (name == "vacuum-bump-1d") {
    s.description = "rho = max(0, sin x)^4, m = 0.5 rho cos x, mollified";
    s.grid = Grid::cube(1, 128);
    s.needs_mollifier = true;
    s.params.eps = 1e-2;
    s.integrator.t_end = 0.2;
    s.integrator.dt_max = 1e-3;
  } else if (name == "shear-wave-2d") {
    s.description = "rho = 1 + 0.1 cos(x + y), u = (0.5 sin y, 0)";
    s.grid = Grid::cube(2, 32);
    s.integrator.t_end = 0.5;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return s;
}

RawData scenario_data(const std::string& name, const Grid& g) {
  auto field = [&g](auto fn) { return ScalarField::from_function(g, fn); };
  RawData raw{ScalarField(g, 1.0), VectorField(g)};
  if (name == "uniform-rest") {
  } else if (name == "acoustic-1d") {
    raw.rho0 = field([](double x, double, double) { return 1.0 + 0.1 * std::sin(x); });
  } else if (name == "vacuum-bump-1d") {
    raw.rho0 = field([](double x, double, double) { return std::pow(std::max(0.0, std::sin(x)), 4); });
    raw.m0[0] = raw.rho0 * field([](double x, double, double) { return 0.5 * std::cos(x); });
  } else if (name == "shear-wave-2d") {
    if (g.dim() < 2) throw ConfigError("scenario shear-wave-2d needs a grid of dimension >= 2");
    raw.rho0 = field([](double x, double y, double) { return 1.0 + 0.1 * std::cos(x + y); });
    raw.m0[0] = raw.rho0 * field([](double, double y, double) { return 0.5 * std::sin(y); });
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return raw;
}

State scenario_state(const std::string& name, const Grid& grid, const QnsParams& params) {
  const RawData raw = scenario_data(name, grid);
  if (scenario(name).needs_mollifier) return mollify(raw, params.eps, params);
  VectorField u(grid);
  for (int c = 0; c < grid.dim(); ++c) u[c] = raw.m0[c] / raw.rho0;
  return make_state(raw.rho0, std::move(u));
}

double InitialReport::get(const std::string& name) const {
  for (const auto& [k, v] : norms)
    if (k == name) return v;
  throw std::out_of_range("InitialReport: no norm '" + name + "'");
}

InitialReport validate_initial(const State& s, const QnsParams& params, double eta) {
  require_positive(s.rho, "validate_initial");
  const ScalarField& rho = s.rho;
  const VectorField u = fluid_velocity(s, params);
  const ScalarField v = sqrt(rho);
  const ScalarField gv2 = norm2(grad(v));
  const double q = 2.0 + eta;

  InitialReport rep;
  auto put = [&rep](const char* name, double x) {
    rep.norms.emplace_back(name, x);
    if (!std::isfinite(x)) rep.all_finite = false;
  };
  put("r0_log_minus_l1", params.r0 * integrate(rho.map([](double x) { return std::abs(std::min(std::log(x), 0.0)); })));
  put("rho_l1", integrate(rho));
  put("rho_lgamma", lp_norm(rho, params.gamma));
  put("grad_sqrt_rho_l2", std::sqrt(integrate(gv2)));
  put("eps_grad_sqrt_rho_l4_4", params.eps * integrate(gv2 * gv2));
  put("eps_rho_negpow_l1", params.eps == 0.0 ? 0.0 : params.eps * integrate(pow(rho, -params.p0)));
  put("kinetic", integrate(rho * norm2(u)));
  put("sqrt_rho_l2eta", lp_norm(v, q));
  put("sqrt_rho_u_l2eta", lp_norm(v * sqrt(norm2(u)), q));
  return rep;
}

}  // namespace qns
