#include "qns/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qns/calculus.hpp"

namespace qns {

namespace {

constexpr double kE = std::numbers::e;

double scaled_rel_gap(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

// |grad |grad v|^2|^2 without differentiating the non-smooth |grad v|.
ScalarField grad_gradsq_norm2(const VectorField& gv) { return norm2(grad(norm2(gv))); }

}  // namespace

FunctionalReport FunctionalReport::inequality(std::string name, double lhs, double rhs, double rel_tol,
                                              double abs_tol) {
  FunctionalReport r;
  r.name = std::move(name);
  r.kind = Kind::Inequality;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.rel_tol = rel_tol;
  r.abs_tol = abs_tol;
  r.passed = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs * (1.0 + rel_tol) + abs_tol;
  return r;
}

FunctionalReport FunctionalReport::identity(std::string name, double lhs, double rhs, double rel_tol,
                                            double abs_tol) {
  FunctionalReport r;
  r.name = std::move(name);
  r.kind = Kind::Identity;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.rel_tol = rel_tol;
  r.abs_tol = abs_tol;
  r.passed = std::isfinite(lhs) && std::isfinite(rhs) &&
             std::abs(lhs - rhs) <= rel_tol * std::max(std::abs(lhs), std::abs(rhs)) + abs_tol;
  return r;
}

double FunctionalReport::relative_gap() const { return scaled_rel_gap(lhs, rhs); }

const char* to_string(FunctionalReport::Kind kind) {
  return kind == FunctionalReport::Kind::Identity ? "identity" : "inequality";
}

double EnergyParts::total() const { return kinetic + mass + pressure + eps_negpow + gradient + eps_quartic; }

double EnergyParts::kappa_bracket() const { return gradient + eps_quartic; }

EnergyParts energy_parts(const State& s, const QnsParams& params) {
  require_positive(s.rho, "energy");
  const VectorField u = fluid_velocity(s, params);
  const ScalarField& rho = s.rho;
  const VectorField gv = grad(sqrt(rho));
  const ScalarField gv2 = norm2(gv);
  const double eps = params.eps;
  const double mu = params.mu();

  EnergyParts e;
  e.kinetic = integrate(rho * norm2(u));
  e.mass = integrate(rho);
  e.pressure = integrate(pow(rho, params.gamma));
  e.eps_negpow = eps == 0.0 ? 0.0 : eps * integrate(pow(rho, -params.p0));
  e.gradient = (2.0 * params.kappa * params.kappa + 2.0 * mu * std::sqrt(eps)) * integrate(gv2);
  e.eps_quartic = eps * mu * integrate(gv2 * gv2);
  return e;
}

double energy(const State& s, const QnsParams& params) { return energy_parts(s, params).total(); }

double bd_entropy(const State& s, const QnsParams& params) {
  require_positive(s.rho, "bd_entropy");
  const ScalarField gv2 = norm2(grad(sqrt(s.rho)));
  const ScalarField log_minus = s.rho.map([](double r) { return std::min(std::log(r), 0.0); });
  return integrate(gv2) + params.eps * integrate(gv2 * gv2) - params.r0 * integrate(log_minus);
}

double mv_functional(const State& s, const QnsParams& params) {
  require_positive(s.rho, "mv_functional");
  const ScalarField q = norm2(fluid_velocity(s, params)) + kE;
  return integrate(s.rho * q * q.map([](double x) { return std::log(x); }));
}

const std::vector<std::string>& dissipation_vocabulary() {
  static const std::vector<std::string> names = {
      "nu_rho_Du2",       "r0_u2",           "r1_rho_u4",           "sqrteps_rho_gradu2",
      "eps_gradv4",       "eps_gradv4_u2",   "eps_rhopow_u2",       "eps32_rho_w3_u2",
      "eps_pflux_hessian", "kappa2_rho_hesslog2", "grad_rho_gamma_half2", "bd_velocity_grad2",
  };
  return names;
}

DissipationMap energy_dissipation(const State& s, const QnsParams& params) {
  require_positive(s.rho, "energy_dissipation");
  const ScalarField& rho = s.rho;
  const VectorField u = fluid_velocity(s, params);
  const double eps = params.eps;
  const double mu = params.mu();
  const double k2 = params.kappa * params.kappa;

  const ScalarField v = sqrt(rho);
  const VectorField gv = grad(v);
  const ScalarField gv2 = norm2(gv);
  const ScalarField u2 = norm2(u);
  const TensorField gu = grad_vec(u);

  DissipationMap d;
  d["nu_rho_Du2"] = params.nu * integrate(rho * norm2(sym_grad(u)));
  d["r0_u2"] = params.r0 * integrate(u2);
  d["r1_rho_u4"] = params.r1 * integrate(rho * u2 * u2);
  d["sqrteps_rho_gradu2"] = std::sqrt(eps) * integrate(rho * norm2(gu));
  d["eps_gradv4"] = eps * integrate(gv2 * gv2);
  d["eps_gradv4_u2"] = eps * integrate(gv2 * gv2 * u2);
  d["eps_rhopow_u2"] = eps == 0.0 ? 0.0 : eps * integrate(pow(rho, -params.p0) * u2);
  if (eps == 0.0) {
    d["eps32_rho_w3_u2"] = 0.0;
    d["eps_pflux_hessian"] = 0.0;
  } else {
    const VectorField w = u + mu * grad(log(rho));
    const ScalarField w3 = pow(norm2(w), 1.5);
    d["eps32_rho_w3_u2"] = std::pow(eps, 1.5) * integrate(rho * w3 * u2);
    const ScalarField integrand = gv2 * norm2(hessian(v)) + grad_gradsq_norm2(gv) +
                                  (2.0 * params.p0 + 1.0) * gv2 * pow(v, -2.0 * params.p0 - 2.0);
    d["eps_pflux_hessian"] = (2.0 * k2 + 2.0 * mu * std::sqrt(eps)) * eps * integrate(integrand);
  }
  d["kappa2_rho_hesslog2"] = k2 * integrate(rho * norm2(hessian(log(rho))));
  d["grad_rho_gamma_half2"] = integrate(norm2(grad(pow(rho, 0.5 * params.gamma))));

  VectorField vu = u;
  for (int i = 0; i < u.dim(); ++i) vu[i] = v * u[i];
  const TensorField bd = grad_vec(vu) - outer(u, gv);
  d["bd_velocity_grad2"] = integrate(norm2(bd));
  return d;
}

std::vector<FunctionalReport> check_jungel(const ScalarField& rho) {
  require_positive(rho, "check_jungel");
  const double hess_log = integrate(rho * norm2(hessian(log(rho))));
  const ScalarField q2 = norm2(grad(pow(rho, 0.25)));
  const double lhs1 = integrate(q2 * q2);
  const double lhs2 = integrate(norm2(hessian(sqrt(rho))));
  return {FunctionalReport::inequality("jungel_quartic", lhs1, 8.0 * hess_log),
          FunctionalReport::inequality("jungel_hessian", lhs2, 7.0 * hess_log)};
}

FunctionalReport check_grad6(const ScalarField& v) {
  require_positive(v, "check_grad6");
  const VectorField gv = grad(v);
  const ScalarField gv2 = norm2(gv);
  const ScalarField lap = laplacian(v);
  const double lhs = integrate(gv2 * gv2 * gv2 / (v * v));
  const double rhs = 2.0 * integrate(gv2 * lap * lap) + 8.0 * integrate(grad_gradsq_norm2(gv));
  return FunctionalReport::inequality("grad6", lhs, rhs);
}

FunctionalReport check_div_vs_D(const ScalarField& rho, const VectorField& u) {
  require_positive(rho, "check_div_vs_D");
  const ScalarField d = div(u);
  const double lhs = integrate(rho * d * d);
  const double rhs = 3.0 * integrate(rho * norm2(sym_grad(u)));
  return FunctionalReport::inequality("div_vs_D", lhs, rhs);
}

FunctionalReport check_flux_identity(const ScalarField& v, double r) {
  const VectorField gv = grad(v);
  const ScalarField gv2 = norm2(gv);
  const ScalarField gvr = gv2.map([r](double x) { return std::pow(x, 0.5 * r); });
  const double lhs = integrate(div(gvr * gv) * div(gv2 * gv));

  const TensorField h = hessian(v);
  const VectorField hg = mat_vec(h, gv);
  const ScalarField hg2 = norm2(hg);
  // 2r |grad v|^(r-2) (grad v . H grad v)^2 + (r+2) |grad v|^r |H grad v|^2 + |grad v|^(r+2) |H|^2
  ScalarField integrand = (r + 2.0) * gvr * hg2 + gvr * gv2 * norm2(h);
  if (r != 0.0) {
    const ScalarField vhv = dot(gv, hg);
    ScalarField first(v.grid());
    for (std::size_t i = 0; i < first.size(); ++i)
      first[i] = gv2[i] > 0.0 ? 2.0 * r * std::pow(gv2[i], 0.5 * r - 1.0) * vhv[i] * vhv[i] : 0.0;
    integrand += first;
  }
  const double rhs = integrate(integrand);
  std::ostringstream name;
  name << "flux_identity_r" << r;
  return FunctionalReport::identity(name.str(), lhs, rhs, 1e-8);
}

FunctionalReport check_grad_sqrtrho_u(const ScalarField& rho, const VectorField& u) {
  require_positive(rho, "check_grad_sqrtrho_u");
  const ScalarField v = sqrt(rho);
  const ScalarField q = pow(rho, 0.25);
  VectorField vu = u;
  for (int i = 0; i < u.dim(); ++i) vu[i] = v * u[i];
  const TensorField left = grad_vec(vu);
  const TensorField right = v * grad_vec(u) + 2.0 * (q * outer(u, grad(q)));
  const double gap = (left - right).max_abs() / (1.0 + left.max_abs());
  return FunctionalReport::inequality("grad_sqrtrho_u", gap, 1e-8, 0.0, 0.0);
}

bool MonitorRecord::all_finite() const {
  for (double x : {time, mass, energy, bd_entropy, mv, rho_min, rho_max, mass_balance_residual})
    if (!std::isfinite(x)) return false;
  for (const auto& [k, x] : dissipation)
    if (!std::isfinite(x)) return false;
  return true;
}

MonitorRecord make_monitor_record(const State& s, const QnsParams& params) {
  const State u = s.form == VelocityForm::U ? s : to_u(s, params);
  MonitorRecord r;
  r.time = s.time;
  r.mass = integrate(u.rho);
  r.energy = energy(u, params);
  r.bd_entropy = bd_entropy(u, params);
  r.mv = mv_functional(u, params);
  r.rho_min = u.rho.min();
  r.rho_max = u.rho.max();
  r.dissipation = energy_dissipation(u, params);
  return r;
}

std::string monitor_csv_header() {
  std::string h = "time,mass,energy,bd_entropy,mv,rho_min,rho_max,mass_balance_residual";
  for (const auto& n : dissipation_vocabulary()) h += "," + n;
  return h;
}

std::string monitor_csv_row(const MonitorRecord& r) {
  std::string row;
  char buf[40];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (!row.empty()) row += ',';
    row += buf;
  };
  for (double x : {r.time, r.mass, r.energy, r.bd_entropy, r.mv, r.rho_min, r.rho_max, r.mass_balance_residual})
    put(x);
  for (const auto& n : dissipation_vocabulary()) {
    const auto it = r.dissipation.find(n);
    put(it == r.dissipation.end() ? 0.0 : it->second);
  }
  return row;
}

}  // namespace qns
