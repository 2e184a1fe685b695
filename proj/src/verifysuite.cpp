#include "qns/verifysuite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"
#include "qns/functionals.hpp"
#include "qns/generators.hpp"
#include "qns/initdata.hpp"
#include "qns/parallel.hpp"
#include "qns/qnsops.hpp"
#include "qns/timeloop.hpp"

namespace qns {

using nlohmann::json;

const char* to_string(SuiteKind k) {
  switch (k) {
    case SuiteKind::Identity: return "identity";
    case SuiteKind::Inequality: return "inequality";
    case SuiteKind::Dynamics: return "dynamics";
  }
  return "?";
}

SuiteKind parse_suite_kind(const std::string& s) {
  if (s == "identity") return SuiteKind::Identity;
  if (s == "inequality") return SuiteKind::Inequality;
  if (s == "dynamics") return SuiteKind::Dynamics;
  throw ConfigError("unknown suite '" + s + "' (expected identity, inequality or dynamics)");
}

const std::vector<std::string>& suite_checks(SuiteKind kind) {
  static const std::vector<std::string> identity{"bohm_forms", "flux_identity_r0", "flux_identity_r2",
                                                 "grad_sqrtrho_u"};
  static const std::vector<std::string> inequality{"jungel_quartic", "jungel_hessian", "grad6", "div_vs_D"};
  static const std::vector<std::string> dynamics{"steady_state",        "equivalence",   "mass_conservation",
                                                 "mass_balance_order",  "energy_budget_order",
                                                 "weak_residual",       "monitor_bounds", "vacuum_bump"};
  switch (kind) {
    case SuiteKind::Identity: return identity;
    case SuiteKind::Inequality: return inequality;
    case SuiteKind::Dynamics: return dynamics;
  }
  return identity;
}

SuiteConfig default_suite_config(SuiteKind kind) {
  SuiteConfig c;
  for (std::uint64_t s = 0; s < 100; ++s) c.seeds.push_back(s);
  c.checks = suite_checks(kind);
  switch (kind) {
    case SuiteKind::Identity:
      c.grids = {{1, 128}, {2, 64}};
      break;
    case SuiteKind::Inequality:
      c.grids = {{1, 128}, {2, 32}, {3, 32}};
      c.modes = 4;
      c.floor = 0.1;
      c.amplitude = 1.0;
      c.rel_tol = 1e-10;
      break;
    case SuiteKind::Dynamics:
      c.seeds = {0};
      c.grids = {{1, 128}};
      break;
  }
  return c;
}

void SuiteConfig::validate(SuiteKind kind) const {
  if (seeds.empty()) throw ConfigError("suite config: seeds must be nonempty");
  if (checks.empty()) throw ConfigError("suite config: checks must be nonempty");
  if (grids.empty()) throw ConfigError("suite config: grids must be nonempty");
  const auto& known = suite_checks(kind);
  for (const auto& c : checks)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ConfigError("suite config: unknown " + std::string(to_string(kind)) + " check '" + c + "'");
  for (const auto& g : grids) {
    if (g.dim < 1 || g.dim > 3) throw ConfigError("suite config: grid dim must be 1, 2 or 3");
    if (kind != SuiteKind::Dynamics && (modes < 1 || 3 * modes > g.n))
      throw ConfigError("suite config: need 1 <= modes and 3 * modes <= n for every grid");
  }
  if (!(floor > 0.0)) throw ConfigError("suite config: floor must be positive");
  if (!(amplitude >= 0.0)) throw ConfigError("suite config: amplitude must be nonnegative");
  if (!(rel_tol >= 0.0) || !(abs_tol >= 0.0)) throw ConfigError("suite config: tolerances must be nonnegative");
  if (threads < 1) throw ConfigError("suite config: threads must be >= 1");
}

const CheckAggregate* SuiteReport::find(const std::string& check) const {
  for (const auto& a : aggregates)
    if (a.check == check) return &a;
  return nullptr;
}

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const auto& a : aggregates) n += a.failures;
  return n;
}

namespace {

double rel_l2(const VectorField& a, const VectorField& b) {
  const double scale = std::max(l2_norm(a), l2_norm(b));
  return scale == 0.0 ? 0.0 : l2_norm(a - b) / scale;
}

CheckRecord bound(const std::string& check, double err, double tol) {
  CheckRecord r;
  r.check = check;
  r.lhs = err;
  r.rhs = tol;
  r.margin = tol - err;
  r.passed = err <= tol;
  return r;
}

CheckRecord from_report(const FunctionalReport& f, const SuiteConfig& c) {
  CheckRecord r;
  r.check = f.name;
  r.lhs = f.lhs;
  r.rhs = f.rhs;
  if (f.kind == FunctionalReport::Kind::Identity) {
    const double gap = std::abs(f.lhs - f.rhs);
    const double allowed = c.rel_tol * std::max(std::abs(f.lhs), std::abs(f.rhs)) + c.abs_tol;
    r.margin = allowed - gap;
    r.passed = gap <= allowed;
    r.detail = "identity, relative gap " + std::to_string(f.relative_gap());
  } else {
    r.margin = f.rhs - f.lhs;
    r.passed = f.lhs <= f.rhs * (1.0 + c.rel_tol) + c.abs_tol;
    r.detail = "inequality";
  }
  return r;
}

struct Fields {
  ScalarField rho;
  VectorField u;
};

Fields make_fields(const SuiteConfig& c, GridSpec gs, std::uint64_t seed) {
  const Grid g = Grid::cube(gs.dim, gs.n);
  return {random_smooth_positive(g, seed, c.modes, c.floor, c.amplitude),
          random_smooth_vector(g, seed + 7919, c.modes, c.amplitude)};
}

CheckRecord evaluate(SuiteKind kind, const SuiteConfig& c, const std::string& check, GridSpec gs,
                     std::uint64_t seed) {
  const Fields f = make_fields(c, gs, seed);
  CheckRecord r;
  if (kind == SuiteKind::Identity) {
    if (check == "bohm_forms") {
      const VectorField a = bohm_force(f.rho, BohmForm::Quotient);
      const VectorField b = bohm_force(f.rho, BohmForm::HessianLog);
      VectorField cf = bohm_force(f.rho, BohmForm::LaplacianOfGrad);
      if (c.inject_canary) cf += 1e-3 * grad(f.rho);
      const double ab = rel_l2(a, b), ac = rel_l2(a, cf), bc = rel_l2(b, cf);
      r = bound(check, std::max({ab, ac, bc}), c.rel_tol + c.abs_tol);
      r.detail = "pairwise relative L2: AB " + std::to_string(ab) + ", AC " + std::to_string(ac) + ", BC " +
                 std::to_string(bc) + (c.inject_canary ? " (canary injected)" : "");
    } else if (check == "flux_identity_r0" || check == "flux_identity_r2") {
      r = from_report(check_flux_identity(sqrt(f.rho), check == "flux_identity_r0" ? 0.0 : 2.0), c);
    } else if (check == "grad_sqrtrho_u") {
      const FunctionalReport fr = check_grad_sqrtrho_u(f.rho, f.u);
      r = bound(check, fr.lhs, c.rel_tol + c.abs_tol);
      r.detail = "scaled nodal max discrepancy";
    }
  } else {
    if (check == "jungel_quartic" || check == "jungel_hessian") {
      for (const auto& fr : check_jungel(f.rho))
        if (fr.name == check) r = from_report(fr, c);
    } else if (check == "grad6") {
      r = from_report(check_grad6(sqrt(f.rho)), c);
    } else if (check == "div_vs_D") {
      r = from_report(check_div_vs_D(f.rho, f.u), c);
    }
  }
  r.check = check;
  r.grid = gs;
  r.seed = seed;
  return r;
}

void aggregate(SuiteReport& rep) {
  std::map<std::string, std::size_t> index;
  for (const auto& r : rep.records) {
    auto it = index.find(r.check);
    if (it == index.end()) {
      it = index.emplace(r.check, rep.aggregates.size()).first;
      CheckAggregate a;
      a.check = r.check;
      a.worst_margin = r.margin;
      a.worst_seed = r.seed;
      a.worst_grid = r.grid;
      rep.aggregates.push_back(a);
    }
    CheckAggregate& a = rep.aggregates[it->second];
    ++a.count;
    if (!r.passed) ++a.failures;
    if (r.margin < a.worst_margin || (!std::isfinite(r.margin) && std::isfinite(a.worst_margin))) {
      a.worst_margin = r.margin;
      a.worst_seed = r.seed;
      a.worst_grid = r.grid;
    }
  }
  rep.passed = rep.failures() == 0;
}

SuiteReport run_field_suite(SuiteKind kind, const SuiteConfig& c) {
  c.validate(kind);
  const auto t0 = std::chrono::steady_clock::now();
  struct Task {
    std::string check;
    GridSpec grid;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& check : c.checks)
    for (const auto& g : c.grids)
      for (auto seed : c.seeds) tasks.push_back({check, g, seed});

  SuiteReport rep;
  rep.kind = kind;
  rep.records.resize(tasks.size());
  parallel_for(tasks.size(), c.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    try {
      rep.records[i] = evaluate(kind, c, t.check, t.grid, t.seed);
    } catch (const std::exception& e) {
      CheckRecord r;
      r.check = t.check;
      r.grid = t.grid;
      r.seed = t.seed;
      r.margin = -INFINITY;
      r.detail = std::string("exception: ") + e.what();
      rep.records[i] = r;
    }
  });
  aggregate(rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---- dynamics checks ----

IntegratorConfig fixed_step(double dt, double t_end) {
  IntegratorConfig c;
  c.dt_init = c.dt_min = c.dt_max = dt;
  c.t_end = t_end;
  return c;
}

QnsParams base_params(double eps) {
  QnsParams p;
  p.nu = 1.0;
  p.kappa = 1.0 / 11.0;
  p.eps = eps;
  return p;
}

State swirl_1d(int n) {
  const Grid g = Grid::cube(1, n);
  VectorField u(g);
  u[0] = ScalarField::from_function(g, [](double x, double, double) { return 0.5 * std::sin(x); });
  return make_state(ScalarField::from_function(g, [](double x, double, double) { return 1.0 + 0.1 * std::cos(x); }),
                    std::move(u));
}

/// Least-squares slope of log(y) against log(x).
double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(4);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

void require_completed(const Trajectory& t, const char* what) {
  if (t.status != RunStatus::Completed)
    throw std::runtime_error(std::string(what) + ": " + to_string(t.status) + " " + t.message);
}

CheckRecord check_steady_state() {
  const Grid g = Grid::cube(2, 16);
  const State s = make_state(ScalarField(g, 1.0), VectorField(g));
  const QnsParams p = base_params(0.0);
  const Trajectory t = integrate(s, p, fixed_step(0.01, 0.1));
  require_completed(t, "steady run");
  double drift = 0.0;
  for (const auto& r : t.records) {
    const auto& r0 = t.records.front();
    drift = std::max({drift, std::abs(r.mass - r0.mass), std::abs(r.energy - r0.energy),
                      std::abs(r.bd_entropy - r0.bd_entropy), std::abs(r.mv - r0.mv)});
  }
  const double budget = energy_budget(t, p).max_abs_residual;
  TestFunctionSpec phi;
  phi.mode = {1, 1, 0};
  const double weak = weak_residual(t.snapshots, phi, p);
  const double mass = t.max_mass_balance_residual();
  CheckRecord r = bound("steady_state", std::max({drift, budget, weak, mass}), 1e-10);
  r.detail = "monitor drift " + list({drift}) + ", energy budget " + list({budget}) + ", weak residual " +
             list({weak}) + ", mass balance " + list({mass});
  return r;
}

CheckRecord check_equivalence() {
  const QnsParams p = base_params(1e-3);
  const State s = scenario_state("acoustic-1d", Grid::cube(1, 128), p);
  std::vector<double> errs;
  for (double dt : {4e-4, 2e-4, 1e-4}) {
    const EquivalenceReport e = equivalence_run(s, p, fixed_step(dt, 0.1));
    if (!e.ok()) throw std::runtime_error("equivalence run failed: " + e.message);
    errs.push_back(std::max(e.max_rho_l2, e.max_u_l2));
  }
  CheckRecord r = bound("equivalence", errs.back(), 1e-5);
  const bool monotone = errs[1] < errs[0] && errs[2] < errs[1];
  r.passed = r.passed && monotone;
  r.detail = "max L2 discrepancy at dt 4e-4, 2e-4, 1e-4: " + list(errs) + (monotone ? "" : " (not monotone)");
  return r;
}

CheckRecord check_mass_conservation() {
  const QnsParams p = base_params(0.0);
  const Trajectory t = integrate(scenario_state("acoustic-1d", Grid::cube(1, 128), p), p, fixed_step(1e-3, 1.0));
  require_completed(t, "mass run");
  double drift = 0.0;
  for (const auto& rec : t.records) drift = std::max(drift, std::abs(rec.mass - t.records[0].mass));
  CheckRecord r = bound("mass_conservation", drift / t.records[0].mass, 1e-12);
  r.detail = "relative mass drift over T = 1 with eps = 0: " + list({r.lhs});
  return r;
}

CheckRecord check_mass_balance_order() {
  const QnsParams p = base_params(1e-2);
  const State s = scenario_state("acoustic-1d", Grid::cube(1, 128), p);
  const std::vector<double> dts{0.02, 0.01, 0.005};
  std::vector<double> res;
  for (double dt : dts) {
    const Trajectory t = integrate(s, p, fixed_step(dt, 1.0));
    require_completed(t, "mass balance run");
    res.push_back(t.max_mass_balance_residual());
  }
  const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
  CheckRecord r;
  r.check = "mass_balance_order";
  r.lhs = std::min(o1, o2);
  r.rhs = 1.8;
  r.margin = r.lhs - r.rhs;
  r.passed = r.lhs >= r.rhs;
  r.detail = "residuals " + list(res) + ", observed orders " + list({o1, o2});
  return r;
}

CheckRecord check_energy_budget_order() {
  QnsParams p;
  p.nu = 0.2;
  p.kappa = 0.0;
  p.eps = 0.0;
  const State s = swirl_1d(64);
  const std::vector<double> dts{0.02, 0.01, 0.005};
  std::vector<double> res;
  for (double dt : dts) {
    const Trajectory t = integrate(s, p, fixed_step(dt, 0.2));
    require_completed(t, "energy budget run");
    res.push_back(energy_budget(t, p).max_abs_residual);
  }
  const double order = fitted_order(dts, res);
  CheckRecord r;
  r.check = "energy_budget_order";
  r.lhs = std::abs(order - 2.0);
  r.rhs = 0.3;
  r.margin = r.rhs - r.lhs;
  r.passed = r.lhs <= r.rhs;
  r.detail = "residuals " + list(res) + ", fitted order " + list({order});
  return r;
}

CheckRecord check_weak_residual() {
  const QnsParams p = base_params(0.0);
  const State s = swirl_1d(64);
  TestFunctionSpec phi;
  phi.phase = 0.4;
  std::vector<double> res;
  for (double dt : {0.02, 0.01, 0.005}) {
    const Trajectory t = integrate(s, p, fixed_step(dt, 0.2));
    require_completed(t, "weak residual run");
    res.push_back(weak_residual(t.snapshots, phi, p));
  }
  CheckRecord r;
  r.check = "weak_residual";
  r.lhs = res.back();
  r.rhs = res.front();
  r.margin = r.rhs - r.lhs;
  r.passed = res[1] < res[0] && res[2] < res[1];
  r.detail = "residuals at dt 0.02, 0.01, 0.005: " + list(res);
  return r;
}

CheckRecord check_monitor_bounds() {
  QnsParams p = base_params(1e-3);
  p.r0 = p.r1 = 0.0;
  const Scenario sc = scenario("acoustic-1d");
  IntegratorConfig c = sc.integrator;
  c.t_end = 1.0;
  const Trajectory t = integrate(scenario_state("acoustic-1d", sc.grid, p), p, c);
  require_completed(t, "monitor run");
  const auto& r0 = t.records.front();
  double mv = 0, bd = 0, lo = INFINITY, hi = 0;
  for (const auto& rec : t.records) {
    mv = std::max(mv, rec.mv);
    bd = std::max(bd, rec.bd_entropy);
    lo = std::min(lo, rec.rho_min);
    hi = std::max(hi, rec.rho_max);
  }
  const double ratio = std::max(mv / r0.mv, bd / r0.bd_entropy);
  CheckRecord r = bound("monitor_bounds", ratio, 10.0);
  r.passed = r.passed && lo > 0.0 && std::isfinite(hi);
  r.detail = "sup mv / initial " + list({mv / r0.mv}) + ", sup bd / initial " + list({bd / r0.bd_entropy}) +
             ", density band [" + list({lo}) + ", " + list({hi}) + "] (empirical proxy, 10x growth bound)";
  return r;
}

CheckRecord check_vacuum_bump() {
  const Scenario sc = scenario("vacuum-bump-1d");
  const Trajectory t = integrate(scenario_state(sc.name, sc.grid, sc.params), sc.params, sc.integrator);
  double lo = INFINITY, hi = 0;
  for (const auto& rec : t.records) {
    lo = std::min(lo, rec.rho_min);
    hi = std::max(hi, rec.rho_max);
  }
  CheckRecord r;
  r.check = "vacuum_bump";
  r.lhs = lo;
  r.rhs = sc.integrator.positivity_floor;
  r.margin = lo - r.rhs;
  r.passed = t.status == RunStatus::Completed && lo > r.rhs;
  r.detail = std::string(to_string(t.status)) + ", density band [" + list({lo}) + ", " + list({hi}) + "]";
  return r;
}

CheckRecord run_dynamics_check(const std::string& name) {
  if (name == "steady_state") return check_steady_state();
  if (name == "equivalence") return check_equivalence();
  if (name == "mass_conservation") return check_mass_conservation();
  if (name == "mass_balance_order") return check_mass_balance_order();
  if (name == "energy_budget_order") return check_energy_budget_order();
  if (name == "weak_residual") return check_weak_residual();
  if (name == "monitor_bounds") return check_monitor_bounds();
  return check_vacuum_bump();
}

}  // namespace

SuiteReport run_identity_suite(const SuiteConfig& config) { return run_field_suite(SuiteKind::Identity, config); }

SuiteReport run_inequality_suite(const SuiteConfig& config) { return run_field_suite(SuiteKind::Inequality, config); }

SuiteReport run_dynamics_suite(const SuiteConfig& config) {
  config.validate(SuiteKind::Dynamics);
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.kind = SuiteKind::Dynamics;
  rep.records.resize(config.checks.size());
  parallel_for(config.checks.size(), config.threads, [&](std::size_t i) {
    try {
      rep.records[i] = run_dynamics_check(config.checks[i]);
    } catch (const std::exception& e) {
      CheckRecord r;
      r.check = config.checks[i];
      r.margin = -INFINITY;
      r.detail = std::string("exception: ") + e.what();
      rep.records[i] = r;
    }
    rep.records[i].seed = config.seeds.front();
    rep.records[i].grid = config.grids.front();
  });
  aggregate(rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SuiteReport run_suite(SuiteKind kind, const SuiteConfig& config) {
  switch (kind) {
    case SuiteKind::Identity: return run_identity_suite(config);
    case SuiteKind::Inequality: return run_inequality_suite(config);
    case SuiteKind::Dynamics: return run_dynamics_suite(config);
  }
  return {};
}

CheckRecord rerun_check(SuiteKind kind, const SuiteConfig& config, const std::string& check, GridSpec grid,
                        std::uint64_t seed) {
  if (kind == SuiteKind::Dynamics) return run_dynamics_check(check);
  return evaluate(kind, config, check, grid, seed);
}

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json record_json(const CheckRecord& r) {
  return json{{"check", r.check},
              {"dim", r.grid.dim},
              {"n", r.grid.n},
              {"seed", r.seed},
              {"lhs", finite_or_null(r.lhs)},
              {"rhs", finite_or_null(r.rhs)},
              {"margin", finite_or_null(r.margin)},
              {"passed", r.passed},
              {"detail", r.detail}};
}

}  // namespace

std::string report_json(const SuiteReport& report, int indent) {
  json j;
  j["suite"] = to_string(report.kind);
  j["passed"] = report.passed;
  j["failures"] = report.failures();
  json checks = json::array();
  for (const auto& a : report.aggregates)
    checks.push_back({{"check", a.check},
                      {"count", a.count},
                      {"failures", a.failures},
                      {"worst_margin", finite_or_null(a.worst_margin)},
                      {"worst_seed", a.worst_seed},
                      {"worst_grid", {{"dim", a.worst_grid.dim}, {"n", a.worst_grid.n}}}});
  j["checks"] = checks;
  json failed = json::array();
  for (const auto& r : report.records)
    if (!r.passed) failed.push_back(record_json(r));
  j["failed_records"] = failed;
  return j.dump(indent);
}

void write_jsonl(std::ostream& os, const SuiteReport& report) {
  for (const auto& r : report.records) os << record_json(r).dump() << '\n';
}

std::pair<SuiteKind, SuiteConfig> parse_suite_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("suite config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("suite config: top level must be an object");
  static const std::vector<std::string> keys{"suite",     "seeds",   "seed_count", "grids",         "modes",
                                             "floor",     "amplitude", "checks",   "rel_tol",       "abs_tol",
                                             "inject_canary", "threads"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("suite config: unknown key '" + k + "'");
  try {
    const SuiteKind kind = parse_suite_kind(j.value("suite", std::string("identity")));
    SuiteConfig c = default_suite_config(kind);
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("seed_count")) {
      c.seeds.clear();
      for (std::uint64_t s = 0; s < j["seed_count"].get<std::uint64_t>(); ++s) c.seeds.push_back(s);
    }
    if (j.contains("grids")) {
      c.grids.clear();
      for (const auto& g : j["grids"]) c.grids.push_back({g.at("dim").get<int>(), g.at("n").get<int>()});
    }
    c.modes = j.value("modes", c.modes);
    c.floor = j.value("floor", c.floor);
    c.amplitude = j.value("amplitude", c.amplitude);
    if (j.contains("checks")) c.checks = j["checks"].get<std::vector<std::string>>();
    c.rel_tol = j.value("rel_tol", c.rel_tol);
    c.abs_tol = j.value("abs_tol", c.abs_tol);
    c.inject_canary = j.value("inject_canary", c.inject_canary);
    c.threads = j.value("threads", c.threads);
    c.validate(kind);
    return {kind, c};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("suite config: ") + e.what());
  }
}

}  // namespace qns
