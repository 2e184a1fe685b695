#include "qns/systems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qns/calculus.hpp"

namespace qns {

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::Target: return "target";
    case Formulation::ApproxU: return "approx-u";
    case Formulation::ApproxW: return "approx-w";
  }
  return "?";
}

Formulation parse_formulation(const std::string& s) {
  if (s == "target") return Formulation::Target;
  if (s == "approx-u") return Formulation::ApproxU;
  if (s == "approx-w") return Formulation::ApproxW;
  throw std::invalid_argument("unknown formulation '" + s + "' (expected target|approx-u|approx-w)");
}

VelocityForm velocity_form(Formulation f) { return f == Formulation::ApproxW ? VelocityForm::W : VelocityForm::U; }

const VectorField* TermBreakdown::find_momentum(const std::string& label) const {
  for (const auto& [k, v] : momentum)
    if (k == label) return &v;
  return nullptr;
}

const ScalarField* TermBreakdown::find_mass(const std::string& label) const {
  for (const auto& [k, v] : mass)
    if (k == label) return &v;
  return nullptr;
}

VectorField TermBreakdown::momentum_sum() const {
  if (momentum.empty()) throw std::logic_error("TermBreakdown: no momentum terms");
  VectorField s(momentum.front().second.grid());
  for (const auto& [k, v] : momentum) s += v;
  return s;
}

ScalarField TermBreakdown::mass_sum() const {
  if (mass.empty()) throw std::logic_error("TermBreakdown: no mass terms");
  ScalarField s(mass.front().second.grid());
  for (const auto& [k, v] : mass) s += v;
  return s;
}

namespace {

// (a . grad) F, i.e. sum_j a_j d_j F_i.
VectorField directional(const VectorField& F, const VectorField& a) { return mat_vec(grad_vec(F), a); }

VectorField componentwise_laplacian(const VectorField& F) {
  VectorField out(F.grid());
  for (int i = 0; i < F.dim(); ++i) out[i] = laplacian(F[i]);
  return out;
}

// Accumulates labeled terms; skipped terms appear as zeros only in the breakdown.
class Assembler {
 public:
  Assembler(const Grid& g, bool keep) : keep_(keep), mass_(g), momentum_(g) {}

  template <class Fn>
  void mass(const char* label, bool active, Fn&& fn) {
    if (active) {
      ScalarField t = fn();
      mass_ += t;
      if (keep_) bd_.mass.emplace_back(label, std::move(t));
    } else if (keep_) {
      bd_.mass.emplace_back(label, ScalarField(mass_.grid()));
    }
  }

  template <class Fn>
  void momentum(const char* label, bool active, Fn&& fn) {
    if (active) {
      VectorField t = fn();
      momentum_ += t;
      if (keep_) bd_.momentum.emplace_back(label, std::move(t));
    } else if (keep_) {
      bd_.momentum.emplace_back(label, VectorField(momentum_.grid()));
    }
  }

  Rhs finish(const ScalarField& rho, Formulation f, bool dealias_out) {
    Rhs r;
    r.formulation = f;
    VectorField dvel(rho.grid());
    for (int i = 0; i < dvel.dim(); ++i) dvel[i] = momentum_[i] / rho;
    r.drho = dealias_out ? dealias(mass_) : std::move(mass_);
    r.dvel = dealias_out ? dealias(dvel) : std::move(dvel);
    r.breakdown = std::move(bd_);
    return r;
  }

 private:
  bool keep_;
  ScalarField mass_;
  VectorField momentum_;
  TermBreakdown bd_;
};

void add_target_terms(Assembler& as, const ScalarField& rho, const VectorField& u, const QnsParams& p,
                      const RhsOptions& opts) {
  as.mass("transport", true, [&] { return -div(rho * u); });
  as.momentum("convection", true, [&] { return -1.0 * (rho * directional(u, u)); });
  as.momentum("viscous", p.nu != 0.0, [&] { return (2.0 * p.nu) * div_tensor(rho * sym_grad(u)); });
  as.momentum("pressure", true, [&] { return -1.0 * grad(p.a * pow(rho, p.gamma)); });
  as.momentum("bohm", p.kappa != 0.0, [&] { return (p.kappa * p.kappa) * bohm_force(rho, opts.bohm); });
  as.momentum("damping-r0", p.r0 != 0.0, [&] { return -p.r0 * u; });
  as.momentum("damping-r1", p.r1 != 0.0, [&] { return (-p.r1) * ((rho * norm2(u)) * u); });
}

// Shared regularization quantities.
struct EpsFields {
  ScalarField v;
  VectorField gv;
  ScalarField gv2;
  ScalarField S;        // v div(|grad v|^2 grad v)
  ScalarField negpow;   // rho^-p0
};

EpsFields eps_fields(const ScalarField& rho, const QnsParams& p) {
  EpsFields e;
  e.v = sqrt(rho);
  e.gv = grad(e.v);
  e.gv2 = norm2(e.gv);
  e.S = e.v * div(e.gv2 * e.gv);
  e.negpow = pow(rho, -p.p0);
  return e;
}

ScalarField cubic_speed(const VectorField& w) {
  return norm2(w).map([](double x) { return x * std::sqrt(x); });
}

}  // namespace

Rhs rhs_target(const State& s, const QnsParams& params, const RhsOptions& opts) {
  if (s.form != VelocityForm::U) throw std::invalid_argument("rhs_target: state must be in u-form");
  require_positive(s.rho, "rhs_target");
  Assembler as(s.grid(), opts.breakdown);
  add_target_terms(as, s.rho, s.vel, params, opts);
  return as.finish(s.rho, Formulation::Target, opts.dealias);
}

Rhs rhs_approx_u(const State& s, const QnsParams& params, const RhsOptions& opts) {
  if (s.form != VelocityForm::U) throw std::invalid_argument("rhs_approx_u: state must be in u-form");
  require_positive(s.rho, "rhs_approx_u");
  const ScalarField& rho = s.rho;
  const VectorField& u = s.vel;
  const QnsParams& p = params;
  Assembler as(s.grid(), opts.breakdown);
  add_target_terms(as, rho, u, p, opts);

  const double eps = p.eps;
  const bool on = eps != 0.0;
  const double mu = p.mu();
  const double se = std::sqrt(eps);
  const bool mu_on = on && mu != 0.0;
  EpsFields e;
  ScalarField logr;
  VectorField glog;
  if (on) {
    e = eps_fields(rho, p);
    logr = log(rho);
    glog = grad(logr);
  }

  as.mass("eps-source", on, [&] { return eps * e.S; });
  as.mass("eps-rhopow", on, [&] { return eps * e.negpow; });

  as.momentum("eps-viscous", on, [&] { return se * div_tensor(rho * grad_vec(u)); });
  as.momentum("eps-bohm", mu_on, [&] { return (se * mu) * bohm_force(rho, BohmForm::HessianLog); });
  as.momentum("eps-pflux-convection", on, [&] { return eps * ((e.v * e.gv2) * directional(u, e.gv)); });
  as.momentum("eps-pflux-hesslog", mu_on,
              [&] { return (eps * mu) * ((e.v * e.gv2) * mat_vec(hessian(logr), e.gv)); });
  as.momentum("eps-rhopow-drag", on, [&] { return (-eps) * (e.negpow * u); });
  as.momentum("eps-cubic-drag", on, [&] {
    const VectorField w = u + mu * glog;
    return (-std::pow(eps, 1.5)) * ((rho * cubic_speed(w)) * u);
  });
  as.momentum("eps-rhopow-grad", mu_on, [&] { return (-eps * mu) * grad(e.negpow); });
  as.momentum("eps-pflux-grad", mu_on, [&] { return (-eps * mu) * grad(e.S); });
  as.momentum("eps-pflux-log", mu_on, [&] { return (eps * mu) * (e.S * glog); });
  return as.finish(rho, Formulation::ApproxU, opts.dealias);
}

Rhs rhs_approx_w(const State& s, const QnsParams& params, const RhsOptions& opts) {
  if (s.form != VelocityForm::W) throw std::invalid_argument("rhs_approx_w: state must be in w-form");
  require_positive(s.rho, "rhs_approx_w");
  const ScalarField& rho = s.rho;
  const VectorField& w = s.vel;
  const QnsParams& p = params;
  const double mu = p.mu();
  const double eps = p.eps;
  const bool on = eps != 0.0;
  const VectorField grho = grad(rho);
  // u = w - mu grad log rho = w - mu grad(rho) / rho
  VectorField u = w;
  if (mu != 0.0) {
    const ScalarField inv = rho.map([](double r) { return 1.0 / r; });
    u -= mu * (inv * grho);
  }
  EpsFields e;
  if (on) e = eps_fields(rho, p);

  Assembler as(s.grid(), opts.breakdown);
  as.mass("transport", true, [&] { return -div(rho * w); });
  as.mass("mu-diffusion", mu != 0.0, [&] { return mu * laplacian(rho); });
  as.mass("eps-source", on, [&] { return eps * e.S; });
  as.mass("eps-rhopow", on, [&] { return eps * e.negpow; });

  as.momentum("convection", true, [&] { return -1.0 * (rho * directional(w, w)); });
  as.momentum("pressure", true, [&] { return -1.0 * grad(p.a * pow(rho, p.gamma)); });
  as.momentum("viscous", p.nu != mu, [&] { return (2.0 * (p.nu - mu)) * div_tensor(rho * sym_grad(w)); });
  as.momentum("mu-laplacian", mu != 0.0, [&] { return mu * (rho * componentwise_laplacian(w)); });
  as.momentum("eps-viscous", on, [&] { return std::sqrt(eps) * div_tensor(rho * grad_vec(w)); });
  as.momentum("mu-gradrho", mu != 0.0, [&] { return (2.0 * mu) * directional(w, grho); });
  as.momentum("eps-pflux-convection", on, [&] { return eps * ((e.v * e.gv2) * directional(w, e.gv)); });
  as.momentum("eps-cubic-drag", on, [&] { return (-std::pow(eps, 1.5)) * ((rho * cubic_speed(w)) * u); });
  as.momentum("damping-r0", p.r0 != 0.0, [&] { return -p.r0 * u; });
  as.momentum("damping-r1", p.r1 != 0.0, [&] { return (-p.r1) * ((rho * norm2(u)) * u); });
  as.momentum("eps-rhopow-drag", on, [&] { return (-eps) * (e.negpow * w); });
  return as.finish(rho, Formulation::ApproxW, opts.dealias);
}

Rhs evaluate_rhs(Formulation f, const State& s, const QnsParams& params, const RhsOptions& opts) {
  switch (f) {
    case Formulation::Target: return rhs_target(s, params, opts);
    case Formulation::ApproxU: return rhs_approx_u(s, params, opts);
    case Formulation::ApproxW: return rhs_approx_w(s, params, opts);
  }
  throw std::invalid_argument("evaluate_rhs: unknown formulation");
}

std::pair<ScalarField, VectorField> implied_u_rates(const State& w_state, const Rhs& w_rhs,
                                                    const QnsParams& params) {
  const double mu = params.mu();
  VectorField du = w_rhs.dvel;
  if (mu != 0.0) du -= mu * grad(w_rhs.drho / w_state.rho);
  return {w_rhs.drho, du};
}

double weak_residual(const std::vector<State>& trajectory, const TestFunctionSpec& phi, const QnsParams& params) {
  if (trajectory.size() < 2) throw std::invalid_argument("weak_residual: need at least 2 samples");
  const Grid& g = trajectory.front().grid();
  const int dim = g.dim();
  if (phi.component < 0 || phi.component >= dim) throw std::invalid_argument("weak_residual: bad component");
  const double T = trajectory.back().time - trajectory.front().time;
  if (!(T > 0.0)) throw std::invalid_argument("weak_residual: trajectory has zero duration");
  const double t0 = trajectory.front().time;
  constexpr double pi = std::numbers::pi;

  std::array<double, 3> k{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) k[a] = 2.0 * pi * phi.mode[a] / g.length(a);
  const ScalarField cosp = ScalarField::from_function(g, [&](double x, double y, double z) {
    return phi.amplitude * std::cos(k[0] * x + k[1] * y + k[2] * z + phi.phase);
  });
  const ScalarField sinp = ScalarField::from_function(g, [&](double x, double y, double z) {
    return phi.amplitude * std::sin(k[0] * x + k[1] * y + k[2] * z + phi.phase);
  });
  // spatial gradient of the scalar profile: d_j psi = -k_j sin(.)
  std::vector<ScalarField> dpsi;
  for (int j = 0; j < dim; ++j) dpsi.push_back(-k[j] * sinp);
  const int c = phi.component;

  auto time_factor = [&](double t) {
    const double s = std::cos(pi * (t - t0) / (2.0 * T));
    return s * s;
  };
  auto time_rate = [&](double t) { return -(pi / (2.0 * T)) * std::sin(pi * (t - t0) / T); };

  auto integrand = [&](const State& st) {
    require_positive(st.rho, "weak_residual");
    const double ct = time_factor(st.time);
    const double dct = time_rate(st.time);
    const ScalarField& rho = st.rho;
    const VectorField& u = st.vel;
    const ScalarField v = sqrt(rho);
    const VectorField gv = grad(v);
    VectorField vu = u;
    for (int i = 0; i < dim; ++i) vu[i] = v * u[i];
    const TensorField gvu = grad_vec(vu);

    ScalarField lhs = (dct * rho * u[c]) * cosp;
    for (int j = 0; j < dim; ++j) lhs += (ct * rho * u[c] * u[j]) * dpsi[j];
    lhs += (ct * params.a * pow(rho, params.gamma)) * dpsi[c];
    // split viscous form
    for (int j = 0; j < dim; ++j) {
      const ScalarField t1 = gvu(c, j) - u[c] * gv[j];
      const ScalarField t2 = gvu(j, c) - gv[c] * u[j];
      lhs -= (params.nu * ct) * (v * (t1 + t2) * dpsi[j]);
    }

    const ScalarField lapv = laplacian(v);
    ScalarField rhs = (params.r0 * ct) * (u[c] * cosp);
    if (params.r1 != 0.0) rhs += (params.r1 * ct) * (rho * norm2(u) * u[c] * cosp);
    const double k2 = params.kappa * params.kappa;
    if (k2 != 0.0) {
      rhs += (4.0 * k2 * ct) * (lapv * gv[c] * cosp);
      rhs += (2.0 * k2 * ct) * (lapv * v * dpsi[c]);
    }
    return integrate(lhs - rhs);
  };

  const State& first = trajectory.front();
  double total = time_factor(first.time) * integrate(first.rho * first.vel[c] * cosp);
  double prev_t = first.time;
  double prev_f = integrand(first);
  for (std::size_t n = 1; n < trajectory.size(); ++n) {
    const double f = integrand(trajectory[n]);
    total += 0.5 * (trajectory[n].time - prev_t) * (f + prev_f);
    prev_t = trajectory[n].time;
    prev_f = f;
  }
  return std::abs(total);
}

}  // namespace qns
