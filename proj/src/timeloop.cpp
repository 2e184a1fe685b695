#include "qns/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"
#include "qns/spectral.hpp"

namespace qns {

const char* to_string(Scheme s) { return s == Scheme::Rk4 ? "rk4-explicit" : "imex"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4-explicit" || s == "rk4") return Scheme::Rk4;
  if (s == "imex") return Scheme::Imex;
  throw ConfigError("unknown scheme '" + s + "' (expected rk4-explicit or imex)");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::PositivityFailure: return "positivity-failure";
    case RunStatus::StepUnderflow: return "step-underflow";
  }
  return "?";
}

void IntegratorConfig::validate() const {
  auto bad = [](const std::string& m) { throw ConfigError("integrator: " + m); };
  if (!(dt_init > 0.0)) bad("dt_init must be positive");
  if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max)) bad("need 0 < dt_min <= dt_init <= dt_max");
  if (!(cfl_target > 0.0 && cfl_target <= 1.0)) bad("cfl_target must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) bad("t_end must be finite and positive");
  if (monitor_every < 1) bad("monitor_every must be >= 1");
  if (!(positivity_floor > 0.0)) bad("positivity_floor must be positive");
}

LinearPart linear_part(Formulation f, const QnsParams& params) {
  LinearPart lin;
  const double se = std::sqrt(params.eps);
  switch (f) {
    case Formulation::Target:
      lin.alpha = params.nu;
      lin.beta = params.nu;
      break;
    case Formulation::ApproxU:
      lin.alpha = params.nu + se;
      lin.beta = params.nu;
      break;
    case Formulation::ApproxW: {
      const double mu = params.mu();
      lin.rho_diffusion = mu;
      lin.alpha = params.nu + se;
      lin.beta = params.nu - mu;
      break;
    }
  }
  return lin;
}

namespace {

struct Rates {
  ScalarField rho;
  VectorField vel;
};

double keff(const WaveVector& w, int a) { return w.nyquist[a] ? 0.0 : w.k[a]; }

// c = 0 applies L; c > 0 solves (I - c L) x = input.
Rates linear_map(const ScalarField& rho, const VectorField& vel, const LinearPart& lin, double c, bool solve) {
  const Grid& g = rho.grid();
  const auto& basis = SpectralBasis::for_grid(g);
  const int d = g.dim();
  Rates out;
  if (lin.rho_diffusion == 0.0 && lin.alpha == 0.0 && lin.beta == 0.0) {
    if (solve) return Rates{rho, vel};
    return Rates{ScalarField(g), VectorField(g)};
  }

  auto r = basis.forward(rho);
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double lk = -lin.rho_diffusion * basis.wave(m).k2;
    r[m] = solve ? r[m] / (1.0 - c * lk) : r[m] * lk;
  }
  out.rho = basis.inverse(std::move(r));

  std::vector<std::vector<Complex>> u(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = basis.forward(vel[i]);
  for (std::size_t m = 0; m < basis.complex_size(); ++m) {
    const WaveVector& w = basis.wave(m);
    Complex kdot = 0.0;
    double kk = 0.0;
    for (int i = 0; i < d; ++i) {
      kdot += keff(w, i) * u[static_cast<std::size_t>(i)][m];
      kk += keff(w, i) * keff(w, i);
    }
    if (solve) {
      const double a = 1.0 + c * lin.alpha * w.k2;
      const double b = c * lin.beta;
      const Complex proj = b * kdot / (a + b * kk);
      for (int i = 0; i < d; ++i) {
        auto& ui = u[static_cast<std::size_t>(i)][m];
        ui = (ui - keff(w, i) * proj) / a;
      }
    } else {
      for (int i = 0; i < d; ++i) {
        auto& ui = u[static_cast<std::size_t>(i)][m];
        ui = -lin.alpha * w.k2 * ui - lin.beta * keff(w, i) * kdot;
      }
    }
  }
  std::vector<ScalarField> comps;
  for (int i = 0; i < d; ++i) comps.push_back(basis.inverse(std::move(u[static_cast<std::size_t>(i)])));
  out.vel = VectorField(std::move(comps));
  return out;
}

Rates apply_linear(const State& s, const LinearPart& lin) { return linear_map(s.rho, s.vel, lin, 0.0, false); }

State solve_linear(const ScalarField& rho, const VectorField& vel, const LinearPart& lin, double c, const State& like,
                   double time) {
  Rates x = linear_map(rho, vel, lin, c, true);
  return State{std::move(x.rho), std::move(x.vel), like.form, time};
}

State axpy(const State& s, double c, const Rates& r, double time) {
  State out{s.rho + c * r.rho, s.vel + c * r.vel, s.form, time};
  return out;
}

void add_scaled(Rates& acc, double c, const Rates& r) {
  acc.rho += c * r.rho;
  acc.vel += c * r.vel;
}

std::size_t bad_nodes(const ScalarField& rho, double floor) {
  std::size_t n = 0;
  for (double x : rho.values())
    if (!(x > floor)) ++n;
  return n;
}

double finite_min(const ScalarField& rho) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : rho.values()) m = std::isnan(x) ? -std::numeric_limits<double>::infinity() : std::min(m, x);
  return m;
}

Rates eval(const RhsFn& rhs, const State& s) {
  if (std::size_t b = bad_nodes(s.rho, 0.0)) throw PositivityFailure(s.time, b, finite_min(s.rho));
  try {
    Rhs r = rhs(s);
    return Rates{std::move(r.drho), std::move(r.dvel)};
  } catch (const VacuumError& e) {
    throw PositivityFailure(s.time, e.bad_nodes(), finite_min(s.rho));
  }
}

State rk4_step(const State& s, const RhsFn& rhs, double dt) {
  const double t = s.time;
  const Rates k1 = eval(rhs, s);
  const Rates k2 = eval(rhs, axpy(s, 0.5 * dt, k1, t + 0.5 * dt));
  const Rates k3 = eval(rhs, axpy(s, 0.5 * dt, k2, t + 0.5 * dt));
  const Rates k4 = eval(rhs, axpy(s, dt, k3, t + dt));
  Rates sum = k1;
  add_scaled(sum, 2.0, k2);
  add_scaled(sum, 2.0, k3);
  add_scaled(sum, 1.0, k4);
  return axpy(s, dt / 6.0, sum, t + dt);
}

// ARS(2,2,2): L-stable implicit part, explicit part E = rhs - L.
State imex_step(const State& s, const RhsFn& rhs, const LinearPart& lin, double dt) {
  static const double gam = 1.0 - 1.0 / std::sqrt(2.0);
  static const double del = 1.0 - 1.0 / (2.0 * gam);
  const double t = s.time;

  Rates e1 = eval(rhs, s);
  add_scaled(e1, -1.0, apply_linear(s, lin));

  const State b2 = axpy(s, gam * dt, e1, t + gam * dt);
  const State u2 = solve_linear(b2.rho, b2.vel, lin, gam * dt, s, t + gam * dt);

  Rates e2 = eval(rhs, u2);
  const Rates l2 = apply_linear(u2, lin);
  add_scaled(e2, -1.0, l2);

  Rates acc{del * e1.rho, del * e1.vel};
  add_scaled(acc, 1.0 - del, e2);
  add_scaled(acc, 1.0 - gam, l2);
  const State b3 = axpy(s, dt, acc, t + dt);
  return solve_linear(b3.rho, b3.vel, lin, gam * dt, s, t + dt);
}

}  // namespace

State step(const State& s, const RhsFn& rhs, const LinearPart& lin, Scheme scheme, double dt, double floor) {
  State next = scheme == Scheme::Rk4 ? rk4_step(s, rhs, dt) : imex_step(s, rhs, lin, dt);
  const std::size_t bad = bad_nodes(next.rho, floor);
  if (bad != 0 || !next.vel.all_finite()) throw PositivityFailure(next.time, bad, finite_min(next.rho));
  return next;
}

namespace {

RhsFn make_rhs(const QnsParams& params, const IntegratorConfig& config) {
  RhsOptions opts;
  opts.dealias = config.dealias;
  opts.bohm = config.bohm;
  const Formulation f = config.formulation;
  return [params, opts, f](const State& s) { return evaluate_rhs(f, s, params, opts); };
}

}  // namespace

State step(const State& s, const QnsParams& params, const IntegratorConfig& config, double dt) {
  return step(s, make_rhs(params, config), linear_part(config.formulation, params), config.scheme, dt,
              config.positivity_floor);
}

double cfl_step(const State& s, const QnsParams& params, const IntegratorConfig& config) {
  const Grid& g = s.grid();
  double ksum = 0.0, k2 = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double ka = (g.n(a) / 3) * 2.0 * std::numbers::pi / g.length(a);
    ksum += ka;
    k2 += ka * ka;
  }
  double speed = s.vel.max_abs();
  if (s.form == VelocityForm::W) speed = std::max(speed, fluid_velocity(s, params).max_abs());
  const double gv2 = params.eps > 0.0 ? norm2(grad(sqrt(s.rho))).max() : 0.0;
  const double rho_min = s.rho.min();
  double rate = speed * ksum + params.kappa * k2 + 3.0 * params.eps * gv2 * k2;
  if (params.eps > 0.0 && rho_min > 0.0) rate += params.eps * std::pow(rho_min, -params.p0 - 1.0);
  // pressure waves
  rate += std::sqrt(params.a * params.gamma * std::pow(std::max(s.rho.max(), 0.0), params.gamma - 1.0)) * ksum;
  if (config.scheme == Scheme::Rk4)
    rate += (2.0 * params.nu + std::sqrt(params.eps) + params.mu()) * k2;
  if (!(rate > 0.0)) return config.dt_max;
  return config.cfl_target / rate;
}

double Trajectory::max_mass_balance_residual() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.mass_balance_residual);
  return m;
}

namespace {

double mass_source(const State& u, const QnsParams& params, Formulation f) {
  if (f == Formulation::Target || params.eps == 0.0) return 0.0;
  const ScalarField gv2 = norm2(grad(sqrt(u.rho)));
  return params.eps * (integrate(pow(u.rho, -params.p0)) - integrate(gv2 * gv2));
}

class Recorder {
 public:
  Recorder(Trajectory& traj, const QnsParams& params, bool keep) : traj_(traj), params_(params), keep_(keep) {}

  void sample(const State& s) {
    const State u = s.form == VelocityForm::U ? s : to_u(s, params_);
    MonitorRecord r = make_monitor_record(u, params_);
    const double src = mass_source(u, params_, traj_.formulation);
    if (!traj_.records.empty()) {
      const MonitorRecord& prev = traj_.records.back();
      const double dt = r.time - prev.time;
      r.mass_balance_residual = std::abs((r.mass - prev.mass) / dt - 0.5 * (src + last_source_));
      for (const auto& [k, v] : r.dissipation) traj_.accumulated[k] += 0.5 * dt * (v + prev.dissipation.at(k));
    } else {
      for (const auto& kv : r.dissipation) traj_.accumulated[kv.first] = 0.0;
    }
    last_source_ = src;
    traj_.records.push_back(std::move(r));
    if (keep_) traj_.snapshots.push_back(u);
  }

 private:
  Trajectory& traj_;
  const QnsParams& params_;
  bool keep_;
  double last_source_ = 0.0;
};

State prepare_initial(const State& initial, const QnsParams& params, const IntegratorConfig& config) {
  State u = initial.form == VelocityForm::U ? initial : to_u(initial, params);
  if (config.dealias) {
    u.rho = dealias(u.rho);
    u.vel = dealias(u.vel);
  }
  if (velocity_form(config.formulation) == VelocityForm::U) return u;
  State w = to_w(u, params);
  if (config.dealias) w.vel = dealias(w.vel);
  return w;
}

}  // namespace

Trajectory integrate(const State& initial, const QnsParams& params, const IntegratorConfig& config) {
  config.validate();
  if (params.strict_mode) check_constraints(params);

  Trajectory traj;
  traj.formulation = config.formulation;
  traj.scheme = config.scheme;
  traj.monitor_every = config.monitor_every;
  traj.final_time = initial.time;

  const auto fail = [&](const PositivityFailure& e) {
    traj.status = RunStatus::PositivityFailure;
    traj.message = e.what();
    traj.failure_time = e.time();
    traj.failure_rho_min = e.rho_min();
    traj.failure_nodes = e.bad_nodes();
  };

  State cur;
  try {
    if (std::size_t b = bad_nodes(initial.rho, config.positivity_floor))
      throw PositivityFailure(initial.time, b, finite_min(initial.rho));
    cur = prepare_initial(initial, params, config);
    if (std::size_t b = bad_nodes(cur.rho, config.positivity_floor))
      throw PositivityFailure(initial.time, b, finite_min(cur.rho));
  } catch (const PositivityFailure& e) {
    fail(e);
    traj.final_state = initial;
    return traj;
  }

  const RhsFn rhs = make_rhs(params, config);
  const LinearPart lin = linear_part(config.formulation, params);
  Recorder rec(traj, params, config.keep_snapshots);
  rec.sample(cur);

  const double t_end = initial.time + config.t_end;
  const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));
  double dt_prev = config.dt_init;
  bool sampled_last = true;

  while (t_end - cur.time > t_tol) {
    double dt;
    if (config.fixed_step()) {
      dt = config.dt_init;
    } else {
      dt = std::min({config.dt_max, cfl_step(cur, params, config), traj.steps == 0 ? config.dt_init : 2.0 * dt_prev});
      if (dt < config.dt_min) {
        traj.status = RunStatus::StepUnderflow;
        traj.message = "step underflow at t=" + std::to_string(cur.time) + ": dt=" + std::to_string(dt) +
                       " < dt_min=" + std::to_string(config.dt_min);
        break;
      }
    }
    bool last = false;
    if (cur.time + dt >= t_end - t_tol) {
      dt = t_end - cur.time;
      last = true;
    }
    try {
      cur = step(cur, rhs, lin, config.scheme, dt, config.positivity_floor);
    } catch (const PositivityFailure& e) {
      fail(e);
      break;
    }
    if (last) cur.time = t_end;
    dt_prev = dt;
    ++traj.steps;
    sampled_last = false;
    if (traj.steps % static_cast<std::size_t>(config.monitor_every) == 0 || last) {
      rec.sample(cur);
      sampled_last = true;
    }
  }
  if (!sampled_last) rec.sample(cur);
  traj.final_time = cur.time;
  traj.final_state = std::move(cur);
  return traj;
}

void write_monitor_csv(std::ostream& os, const std::vector<MonitorRecord>& records) {
  os << monitor_csv_header() << '\n';
  for (const auto& r : records) os << monitor_csv_row(r) << '\n';
}

double budget_energy(const State& s, const QnsParams& params) {
  const VectorField u = fluid_velocity(s, params);
  const ScalarField& rho = s.rho;
  const ScalarField density = 0.5 * (rho * norm2(u)) + (params.a / (params.gamma - 1.0)) * pow(rho, params.gamma) +
                              (2.0 * params.kappa * params.kappa) * norm2(grad(sqrt(rho)));
  return integrate(density);
}

double budget_power(const State& s, const QnsParams& params, Formulation f) {
  const State u = s.form == VelocityForm::U ? s : to_u(s, params);
  const DissipationMap d = energy_dissipation(u, params);
  double p = -(2.0 * d.at("nu_rho_Du2") + d.at("r0_u2") + d.at("r1_rho_u4"));
  if (f == Formulation::Target || params.eps == 0.0) return p;

  RhsOptions opts;
  opts.dealias = false;
  opts.breakdown = true;
  const Rhs r = evaluate_rhs(Formulation::ApproxU, u, params, opts);
  const ScalarField& rho = u.rho;
  const ScalarField v = sqrt(rho);
  const double k2 = params.kappa * params.kappa;
  const ScalarField coef = 0.5 * norm2(u.vel) +
                           (params.a * params.gamma / (params.gamma - 1.0)) * pow(rho, params.gamma - 1.0) -
                           (2.0 * k2) * (laplacian(v) / v);
  ScalarField g(rho.grid());
  for (const auto& [label, term] : r.breakdown.mass)
    if (label.rfind("eps-", 0) == 0) g += term;
  ScalarField work(rho.grid());
  for (const auto& [label, term] : r.breakdown.momentum)
    if (label.rfind("eps-", 0) == 0) work += dot(u.vel, term);
  return p + integrate(coef * g) + integrate(work);
}

EnergyBudgetReport energy_budget(const Trajectory& traj, const QnsParams& params) {
  if (traj.formulation == Formulation::ApproxW)
    throw std::invalid_argument("energy_budget: approx-w trajectories are not supported");
  if (traj.monitor_every != 1 || traj.snapshots.size() < 2)
    throw std::invalid_argument("energy_budget: needs snapshots at every step (monitor_every = 1)");
  EnergyBudgetReport rep;
  double e_prev = budget_energy(traj.snapshots[0], params);
  double p_prev = budget_power(traj.snapshots[0], params, traj.formulation);
  for (std::size_t n = 1; n < traj.snapshots.size(); ++n) {
    const State& s = traj.snapshots[n];
    const double e = budget_energy(s, params);
    const double p = budget_power(s, params, traj.formulation);
    const double t0 = traj.snapshots[n - 1].time;
    const double res = (e - e_prev) / (s.time - t0) - 0.5 * (p + p_prev);
    rep.times.push_back(0.5 * (t0 + s.time));
    rep.residuals.push_back(res);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(res));
    e_prev = e;
    p_prev = p;
  }
  return rep;
}

EquivalenceReport equivalence_run(const State& initial, const QnsParams& params, IntegratorConfig config) {
  config.dt_min = config.dt_max = config.dt_init;
  config.keep_snapshots = true;
  EquivalenceReport rep;

  config.formulation = Formulation::ApproxU;
  const Trajectory tu = integrate(initial, params, config);
  config.formulation = Formulation::ApproxW;
  const Trajectory tw = integrate(initial, params, config);
  rep.status_u = tu.status;
  rep.status_w = tw.status;
  if (!tu.message.empty()) rep.message = "approx-u: " + tu.message;
  if (!tw.message.empty()) rep.message += (rep.message.empty() ? "" : "; ") + std::string("approx-w: ") + tw.message;

  const std::size_t n = std::min(tu.snapshots.size(), tw.snapshots.size());
  for (std::size_t i = 0; i < n; ++i) {
    const State& a = tu.snapshots[i];
    const State& b = tw.snapshots[i];
    rep.max_rho_l2 = std::max(rep.max_rho_l2, l2_norm(a.rho - b.rho));
    rep.max_u_l2 = std::max(rep.max_u_l2, l2_norm(a.vel - b.vel));
  }
  rep.samples = n;
  return rep;
}

}  // namespace qns
