#include "qns/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"
#include "qns/functionals.hpp"
#include "qns/initdata.hpp"
#include "qns/parallel.hpp"
#include "qns/snapshot.hpp"
#include "qns/verifysuite.hpp"

namespace fs = std::filesystem;

namespace qns {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError(where + ": unknown key '" + k + "'");
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

void read_number(const json& obj, const char* key, double& target, const std::string& where) {
  if (obj.contains(key)) target = number(obj, key, where);
}

std::array<double, Grid::kMaxDim> triple(const json& v, int dim, double fallback, const std::string& what) {
  std::array<double, Grid::kMaxDim> out{fallback, fallback, fallback};
  if (v.is_number()) {
    for (int a = 0; a < dim; ++a) out[a] = v.get<double>();
  } else if (v.is_array() && static_cast<int>(v.size()) == dim) {
    for (int a = 0; a < dim; ++a) out[a] = v[static_cast<std::size_t>(a)].get<double>();
  } else {
    throw ConfigError("grid." + what + " must be a number or a list of length dim");
  }
  return out;
}

Grid parse_grid(const json& g) {
  reject_unknown(g, {"dim", "n", "length"}, "grid");
  const int dim = g.value("dim", 1);
  if (dim < 1 || dim > 3) throw ConfigError("grid.dim must be 1, 2 or 3");
  const auto n = triple(g.value("n", json(64)), dim, 1, "n");
  const auto len = triple(g.value("length", json(2.0 * std::numbers::pi)), dim, 1.0, "length");
  std::array<int, Grid::kMaxDim> ni{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 4 || n[a] != std::floor(n[a]) || static_cast<int>(n[a]) % 2 != 0)
      throw ConfigError("grid.n must be even integers >= 4");
    if (!(len[a] > 0.0)) throw ConfigError("grid.length must be positive");
    ni[a] = static_cast<int>(n[a]);
  }
  return Grid(dim, ni, len);
}

void parse_params(const json& p, QnsParams& params) {
  reject_unknown(p, {"nu", "kappa", "gamma", "a", "r0", "r1", "eps", "p0", "sigma0", "strict_mode"}, "params");
  read_number(p, "nu", params.nu, "params");
  read_number(p, "kappa", params.kappa, "params");
  read_number(p, "gamma", params.gamma, "params");
  read_number(p, "a", params.a, "params");
  read_number(p, "r0", params.r0, "params");
  read_number(p, "r1", params.r1, "params");
  read_number(p, "eps", params.eps, "params");
  read_number(p, "p0", params.p0, "params");
  read_number(p, "sigma0", params.sigma0, "params");
  if (p.contains("strict_mode")) {
    if (!p["strict_mode"].is_boolean()) throw ConfigError("params.strict_mode must be a boolean");
    params.strict_mode = p["strict_mode"].get<bool>();
  }
}

void parse_integrator(const json& j, IntegratorConfig& c) {
  reject_unknown(j,
                 {"scheme", "formulation", "dt_init", "dt_min", "dt_max", "cfl_target", "t_end", "monitor_every",
                  "positivity_floor", "dealias"},
                 "integrator");
  if (j.contains("scheme")) c.scheme = parse_scheme(j["scheme"].get<std::string>());
  if (j.contains("formulation")) {
    try {
      c.formulation = parse_formulation(j["formulation"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  read_number(j, "dt_init", c.dt_init, "integrator");
  read_number(j, "dt_min", c.dt_min, "integrator");
  read_number(j, "dt_max", c.dt_max, "integrator");
  read_number(j, "cfl_target", c.cfl_target, "integrator");
  read_number(j, "t_end", c.t_end, "integrator");
  read_number(j, "positivity_floor", c.positivity_floor, "integrator");
  if (j.contains("monitor_every")) {
    const double m = number(j, "monitor_every", "integrator");
    if (m != std::floor(m)) throw ConfigError("integrator.monitor_every must be an integer");
    c.monitor_every = static_cast<int>(m);
  }
  if (j.contains("dealias")) c.dealias = j["dealias"].get<bool>();
}

}  // namespace

QnsParams RunConfig::effective_params() const {
  if (mode == ParamMode::Paper) return params.with_paper_constants();
  QnsParams p = params;
  p.mode = ParamMode::Desk;
  return p;
}

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    reject_unknown(j, {"description", "scenario", "snapshot", "grid", "params", "integrator", "output", "mode", "sweep"},
                   "config");
    RunConfig c;
    const bool has_scenario = j.contains("scenario"), has_snapshot = j.contains("snapshot");
    if (has_scenario == has_snapshot) throw ConfigError("config needs exactly one of 'scenario' or 'snapshot'");
    if (has_scenario) {
      c.scenario = j["scenario"].get<std::string>();
      const Scenario sc = scenario(c.scenario);
      c.grid = sc.grid;
      c.params = sc.params;
      c.integrator = sc.integrator;
      if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
    } else {
      c.snapshot = j["snapshot"].get<std::string>();
      if (c.snapshot.is_relative()) c.snapshot = base_dir / c.snapshot;
      if (!fs::exists(c.snapshot)) throw ConfigError("snapshot file not found: " + c.snapshot.string());
      if (j.contains("grid")) throw ConfigError("grid is taken from the snapshot file");
      c.params.nu = 1.0;
      c.params.kappa = 1.0 / 11.0;
    }
    if (j.contains("params")) parse_params(j["params"], c.params);
    if (j.contains("integrator")) parse_integrator(j["integrator"], c.integrator);
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("mode")) {
      try {
        c.mode = parse_param_mode(j["mode"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (j.contains("sweep")) {
      reject_unknown(j["sweep"], {"nu", "kappa", "r0", "r1", "eps"}, "sweep");
      for (const auto& [axis, values] : j["sweep"].items()) {
        if (!values.is_array() || values.empty()) throw ConfigError("sweep." + axis + " must be a nonempty list");
        c.sweep.emplace_back(axis, values.get<std::vector<double>>());
      }
    }
    try {
      c.params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.integrator.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

State build_initial_state(const RunConfig& config, const QnsParams& params) {
  if (!config.scenario.empty()) {
    if (scenario(config.scenario).needs_mollifier && !(params.eps > 0.0))
      throw ConfigError("scenario " + config.scenario + " needs eps > 0 for mollification");
    return scenario_state(config.scenario, config.grid, params);
  }
  const auto records = read_snapshot_file(config.snapshot);
  const SnapshotRecord* rho = nullptr;
  const SnapshotRecord* m = nullptr;
  const SnapshotRecord* u = nullptr;
  for (const auto& r : records) {
    if (r.name == "rho") rho = &r;
    if (r.name == "m") m = &r;
    if (r.name == "u") u = &r;
  }
  if (!rho || rho->components.size() != 1) throw ConfigError("snapshot needs a scalar record 'rho'");
  const ScalarField& density = rho->components[0];
  const Grid& g = density.grid();
  if (m && u) throw ConfigError("snapshot must not carry both 'm' and 'u'");
  VectorField vel(g);
  if (u) vel = as_vector(*u);
  if (m) {
    RawData raw{density, as_vector(*m)};
    if (count_nonpositive(density) > 0) {
      if (!(params.eps > 0.0)) throw ConfigError("snapshot density has vacuum; mollification needs eps > 0");
      return mollify(raw, params.eps, params);
    }
    raw.validate();
    for (int c = 0; c < g.dim(); ++c) vel[c] = raw.m0[c] / density;
  } else if (count_nonpositive(density) > 0) {
    if (vel.max_abs() != 0.0) throw ConfigError("snapshot with vacuum must give momentum 'm', not velocity");
    if (!(params.eps > 0.0)) throw ConfigError("snapshot density has vacuum; mollification needs eps > 0");
    return mollify(RawData{density, vel}, params.eps, params);
  }
  return make_state(density, std::move(vel), VelocityForm::U, rho->time);
}

fs::path resolve_output(const CliOptions& opts, const fs::path& configured) {
  if (opts.out) return *opts.out;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return configured;
}

namespace {

json params_json(const QnsParams& p) {
  return json{{"nu", p.nu},   {"kappa", p.kappa}, {"gamma", p.gamma}, {"a", p.a},
              {"r0", p.r0},   {"r1", p.r1},       {"eps", p.eps},     {"p0", p.p0},
              {"sigma0", p.sigma0}, {"strict_mode", p.strict_mode}, {"mu", p.mu()}, {"mode", to_string(p.mode)}};
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct RunStats {
  double sup_energy = -INFINITY, sup_bd = -INFINITY, sup_mv = -INFINITY;
  double min_rho = INFINITY, max_rho = -INFINITY, max_mass_residual = 0.0;
};

RunStats stats_of(const Trajectory& t) {
  RunStats s;
  for (const auto& r : t.records) {
    s.sup_energy = std::max(s.sup_energy, r.energy);
    s.sup_bd = std::max(s.sup_bd, r.bd_entropy);
    s.sup_mv = std::max(s.sup_mv, r.mv);
    s.min_rho = std::min(s.min_rho, r.rho_min);
    s.max_rho = std::max(s.max_rho, r.rho_max);
    s.max_mass_residual = std::max(s.max_mass_residual, r.mass_balance_residual);
  }
  return s;
}

struct RunOutcome {
  int code = kExitOk;
  std::string status;
  std::string message;
  RunStats stats;
  double final_time = 0.0;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

/// Integrates one configuration into `dir`. Config-level problems throw ConfigError
/// or AdmissibilityError; run failures are reported through the outcome.
RunOutcome run_into(const RunConfig& cfg, const QnsParams& params, const fs::path& dir) {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  QnsParams lenient = params;
  lenient.strict_mode = false;
  const ConstraintReport constraints = check_constraints(lenient);
  if (params.strict_mode) check_constraints(params);

  State initial;
  try {
    initial = build_initial_state(cfg, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial data: ") + e.what());
  } catch (const VacuumError& e) {
    throw ConfigError(std::string("initial data: ") + e.what());
  }
  const InitialReport norms = validate_initial(initial, params);

  IntegratorConfig ic = cfg.integrator;
  ic.keep_snapshots = false;
  const Trajectory traj = integrate(initial, params, ic);

  fs::create_directories(dir);
  {
    std::ofstream os(dir / "monitor.csv");
    write_monitor_csv(os, traj.records);
  }
  const State final_u = traj.final_state.form == VelocityForm::U ? traj.final_state : to_u(traj.final_state, params);
  write_snapshot_file(dir / "final.snap", {scalar_record("rho", final_u.time, final_u.rho),
                                           vector_record("u", final_u.time, final_u.vel)});

  RunOutcome o;
  o.stats = stats_of(traj);
  o.final_time = traj.final_time;
  o.status = to_string(traj.status);
  o.message = traj.message;
  o.code = traj.status == RunStatus::Completed           ? kExitOk
           : traj.status == RunStatus::PositivityFailure ? kExitPositivityFailure
                                                         : kExitCheckFailure;

  json j;
  j["status"] = o.status;
  j["message"] = o.message;
  if (!cfg.scenario.empty()) j["scenario"] = cfg.scenario;
  else j["snapshot"] = cfg.snapshot.filename().string();
  j["grid"] = cfg.scenario.empty() ? initial.grid().describe() : cfg.grid.describe();
  j["params"] = params_json(params);
  j["integrator"] = {{"scheme", to_string(ic.scheme)},
                     {"formulation", to_string(ic.formulation)},
                     {"dt_init", ic.dt_init},
                     {"dt_min", ic.dt_min},
                     {"dt_max", ic.dt_max},
                     {"cfl_target", ic.cfl_target},
                     {"t_end", ic.t_end},
                     {"monitor_every", ic.monitor_every},
                     {"positivity_floor", ic.positivity_floor}};
  json cr = json::array();
  for (const auto& c : constraints.checks)
    cr.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"passed", c.passed},
                  {"informational", c.informational}});
  j["constraints"] = {{"admissible", constraints.admissible()}, {"checks", cr}};
  json in = json::object();
  for (const auto& [k, v] : norms.norms) in[k] = finite_or_null(v);
  j["initial_norms"] = in;
  j["steps"] = traj.steps;
  j["final_time"] = traj.final_time;
  if (!traj.records.empty()) {
    const MonitorRecord& last = traj.records.back();
    j["final"] = {{"time", last.time},       {"mass", last.mass},       {"energy", last.energy},
                  {"bd_entropy", last.bd_entropy}, {"mv", last.mv}, {"rho_min", last.rho_min},
                  {"rho_max", last.rho_max}};
  }
  j["sup"] = {{"energy", finite_or_null(o.stats.sup_energy)},
              {"bd_entropy", finite_or_null(o.stats.sup_bd)},
              {"mv", finite_or_null(o.stats.sup_mv)},
              {"rho_max", finite_or_null(o.stats.max_rho)},
              {"mass_balance_residual", o.stats.max_mass_residual}};
  j["inf"] = {{"rho_min", finite_or_null(o.stats.min_rho)}};
  json acc = json::object();
  for (const auto& [k, v] : traj.accumulated) acc[k] = finite_or_null(v);
  j["accumulated_dissipation"] = acc;
  if (traj.status == RunStatus::PositivityFailure)
    j["failure"] = {{"time", traj.failure_time},
                    {"nodes", traj.failure_nodes},
                    {"rho_min", finite_or_null(traj.failure_rho_min)}};
  write_text(dir / "summary.json", j.dump(2) + "\n");
  return o;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

int cmd_run(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  if (!opts.config) {
    err << "run: --config is required\n";
    return kExitConfigError;
  }
  try {
    RunConfig cfg = load_run_config(*opts.config);
    if (opts.mode) cfg.mode = *opts.mode;
    const QnsParams params = cfg.effective_params();
    const fs::path dir = resolve_output(opts, cfg.output);
    const RunOutcome o = run_into(cfg, params, dir);
    out << "run " << o.status << " at t=" << fmt(o.final_time) << "  rho in [" << fmt(o.stats.min_rho) << ", "
        << fmt(o.stats.max_rho) << "]  sup energy " << fmt(o.stats.sup_energy) << "\n";
    out << "outputs: " << (dir / "monitor.csv").string() << ", " << (dir / "final.snap").string() << ", "
        << (dir / "summary.json").string() << "\n";
    if (o.code != kExitOk) err << "run: " << o.message << "\n";
    return o.code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const AdmissibilityError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitCheckFailure;
  }
}

int cmd_verify(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<SuiteKind, SuiteConfig>> suites;
  fs::path dir = resolve_output(opts, "qnslab-verify");
  try {
    if (opts.config) {
      std::ifstream in(*opts.config);
      if (!in) throw ConfigError("cannot read suite config: " + opts.config->string());
      std::stringstream buf;
      buf << in.rdbuf();
      suites.push_back(parse_suite_config(buf.str()));
    } else {
      for (auto k : {SuiteKind::Identity, SuiteKind::Inequality, SuiteKind::Dynamics})
        suites.emplace_back(k, default_suite_config(k));
    }
    for (auto& [kind, c] : suites) {
      if (opts.threads) c.threads = *opts.threads;
      c.validate(kind);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  bool all = true;
  try {
    fs::create_directories(dir);
    for (const auto& [kind, c] : suites) {
      const SuiteReport r = run_suite(kind, c);
      write_text(dir / ("verify_" + std::string(to_string(kind)) + ".json"), report_json(r) + "\n");
      std::ofstream jl(dir / ("verify_" + std::string(to_string(kind)) + ".jsonl"));
      write_jsonl(jl, r);
      out << to_string(kind) << " suite: " << (r.passed ? "PASS" : "FAIL") << " (" << r.records.size()
          << " checks, " << r.failures() << " failures, " << fmt(r.seconds) << " s)\n";
      for (const auto& a : r.aggregates)
        out << "  " << std::left << std::setw(22) << a.check << a.count - a.failures << "/" << a.count
            << " passed, worst margin " << fmt(a.worst_margin) << " (seed " << a.worst_seed << ", dim "
            << a.worst_grid.dim << ", n " << a.worst_grid.n << ")\n";
      all = all && r.passed;
    }
  } catch (const std::exception& e) {
    err << "verify failed: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return all ? kExitOk : kExitCheckFailure;
}

int cmd_sweep(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  if (!opts.config) {
    err << "sweep: --config is required\n";
    return kExitConfigError;
  }
  RunConfig cfg;
  try {
    cfg = load_run_config(*opts.config);
    if (opts.mode) cfg.mode = *opts.mode;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const fs::path dir = resolve_output(opts, cfg.output);

  std::vector<std::vector<double>> points{{}};
  for (const auto& [axis, values] : cfg.sweep) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points)
      for (double v : values) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    points = std::move(next);
  }

  std::vector<RunOutcome> outcomes(points.size());
  parallel_for(points.size(), opts.threads.value_or(1), [&](std::size_t i) {
    RunConfig rc = cfg;
    for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
      const std::string& axis = cfg.sweep[a].first;
      const double v = points[i][a];
      if (axis == "nu") rc.params.nu = v;
      if (axis == "kappa") rc.params.kappa = v;
      if (axis == "r0") rc.params.r0 = v;
      if (axis == "r1") rc.params.r1 = v;
      if (axis == "eps") rc.params.eps = v;
    }
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    RunOutcome& o = outcomes[i];
    try {
      o = run_into(rc, rc.effective_params(), dir / name);
    } catch (const std::exception& e) {
      o.code = kExitConfigError;
      o.status = "config-error";
      o.message = e.what();
    }
  });

  std::ostringstream csv;
  csv << "run";
  for (const auto& [axis, values] : cfg.sweep) csv << ',' << axis;
  csv << ",status,exit_code,final_time,sup_energy,sup_bd_entropy,sup_mv,min_rho,max_rho,max_mass_balance_residual\n";
  auto g17 = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  bool ok = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const RunOutcome& o = outcomes[i];
    csv << i;
    for (double v : points[i]) csv << ',' << g17(v);
    csv << ',' << o.status << ',' << o.code << ',' << g17(o.final_time) << ',' << g17(o.stats.sup_energy) << ','
        << g17(o.stats.sup_bd) << ',' << g17(o.stats.sup_mv) << ',' << g17(o.stats.min_rho) << ','
        << g17(o.stats.max_rho) << ',' << g17(o.stats.max_mass_residual) << '\n';
    if (o.code != kExitOk) {
      ok = false;
      err << "sweep run " << i << ": " << o.status << " " << o.message << "\n";
    }
  }
  try {
    fs::create_directories(dir);
    write_text(dir / "sweep.csv", csv.str());
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  out << "sweep: " << points.size() << " runs, " << (ok ? "all completed" : "some failed") << "; table "
      << (dir / "sweep.csv").string() << "\n";
  return ok ? kExitOk : kExitCheckFailure;
}

std::vector<double> MonitorTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("monitor table has no column '" + name + "'");
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

MonitorTable read_monitor_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read monitor file: " + path.string());
  MonitorTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  if (!std::getline(in, line)) throw ConfigError("empty monitor file: " + path.string());
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line);
    if (parts.size() != t.columns.size()) throw ConfigError("malformed monitor row in " + path.string());
    std::vector<double> row;
    for (const auto& p : parts) {
      try {
        row.push_back(std::stod(p));
      } catch (const std::exception&) {
        throw ConfigError("non-numeric monitor entry '" + p + "' in " + path.string());
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw ConfigError("monitor file has no rows: " + path.string());
  return t;
}

namespace {

/// Markdown section for one monitor file; returns false on a bound violation.
bool report_section(const fs::path& file, const MonitorTable& t, std::ostream& md) {
  const auto time = t.column("time");
  md << "## " << file.string() << "\n\n";
  md << "samples: " << t.rows.size() << ", t in [" << fmt(time.front()) << ", " << fmt(time.back()) << "]\n\n";
  md << "| quantity | initial | final | min | max | time integral |\n|---|---|---|---|---|---|\n";
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const auto col = t.column(t.columns[c]);
    double integral = 0.0;
    for (std::size_t i = 1; i < col.size(); ++i) integral += 0.5 * (time[i] - time[i - 1]) * (col[i] + col[i - 1]);
    md << "| " << t.columns[c] << " | " << fmt(col.front()) << " | " << fmt(col.back()) << " | "
       << fmt(*std::min_element(col.begin(), col.end())) << " | " << fmt(*std::max_element(col.begin(), col.end()))
       << " | " << fmt(integral) << " |\n";
  }
  bool ok = true;
  md << "\nbounds (empirical desk-scale proxies, not proofs):\n\n";
  auto growth = [&](const char* name) {
    const auto col = t.column(name);
    const double sup = *std::max_element(col.begin(), col.end());
    const bool pass = std::isfinite(sup) && sup <= 10.0 * col.front() + 1e-12;
    md << "- " << name << ": sup " << fmt(sup) << " vs 10 x initial " << fmt(10.0 * col.front()) << ": "
       << (pass ? "ok" : "VIOLATED") << "\n";
    ok = ok && pass;
  };
  growth("mv");
  growth("bd_entropy");
  const auto lo = t.column("rho_min");
  const auto hi = t.column("rho_max");
  const double band_lo = *std::min_element(lo.begin(), lo.end());
  const double band_hi = *std::max_element(hi.begin(), hi.end());
  const bool band = band_lo > 0.0 && std::isfinite(band_hi);
  md << "- density band [" << fmt(band_lo) << ", " << fmt(band_hi) << "]: " << (band ? "ok" : "VIOLATED") << "\n";
  bool finite = true;
  for (const auto& r : t.rows)
    for (double x : r) finite = finite && std::isfinite(x);
  md << "- all entries finite: " << (finite ? "ok" : "VIOLATED") << "\n\n";
  return ok && band && finite;
}

}  // namespace

int cmd_report(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  if (!opts.config) {
    err << "report: --config must name a monitor CSV or a run directory\n";
    return kExitConfigError;
  }
  const fs::path input = *opts.config;
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& e : fs::recursive_directory_iterator(input))
      if (e.is_regular_file() && e.path().filename() == "monitor.csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
  } else if (fs::exists(input)) {
    files.push_back(input);
  }
  if (files.empty()) {
    err << "report: no monitor files found at " << input.string() << "\n";
    return kExitConfigError;
  }
  std::ostringstream md;
  md << "# Monitor report\n\n";
  bool ok = true;
  try {
    for (const auto& f : files) ok = report_section(fs::relative(f, fs::is_directory(input) ? input : f.parent_path()),
                                                    read_monitor_csv(f), md) && ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const fs::path dir = resolve_output(opts, fs::is_directory(input) ? input : input.parent_path());
  try {
    fs::create_directories(dir);
    write_text(dir / "report.md", md.str());
  } catch (const std::exception& e) {
    err << "report: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  out << md.str();
  out << "report written to " << (dir / "report.md").string() << (ok ? "" : " (bound violations)") << "\n";
  return ok ? kExitOk : kExitCheckFailure;
}

}  // namespace qns
