#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qns/functionals.hpp"
#include "qns/systems.hpp"

namespace qns {

enum class Scheme { Rk4, Imex };

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

struct IntegratorConfig {
  Scheme scheme = Scheme::Imex;
  Formulation formulation = Formulation::ApproxU;
  double dt_init = 1e-3;
  double dt_min = 1e-9;
  double dt_max = 1e-2;
  double cfl_target = 0.5;
  double t_end = 1.0;
  int monitor_every = 1;
  double positivity_floor = 1e-10;
  /// Keep a u-form copy of the state at every monitor sample.
  bool keep_snapshots = true;
  bool dealias = true;
  BohmForm bohm = BohmForm::Quotient;

  /// dt_min == dt_max: every step uses dt_init regardless of the CFL estimate.
  bool fixed_step() const { return dt_min == dt_max; }
  /// Throws ConfigError.
  void validate() const;
};

/// Constant-coefficient part of the dissipative operators treated implicitly:
/// rho_t gets rho_diffusion * lap(rho); the velocity gets
/// alpha * lap(vel) + beta * grad div(vel).
struct LinearPart {
  double rho_diffusion = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

LinearPart linear_part(Formulation f, const QnsParams& params);

using RhsFn = std::function<Rhs(const State&)>;

/// One step of the scheme. Imex is the stiffly accurate ARS(2,2,2) method:
/// `lin` implicit in Fourier space, rhs - lin explicit. Rk4 ignores `lin`.
/// Throws PositivityFailure if any node of the new density is <= floor
/// (or an intermediate stage loses positivity).
State step(const State& s, const RhsFn& rhs, const LinearPart& lin, Scheme scheme, double dt, double floor);

/// Convenience overload using the configured formulation and scheme.
State step(const State& s, const QnsParams& params, const IntegratorConfig& config, double dt);

/// Largest stable step estimate divided into the CFL target:
/// rate = max|vel| * sum_a kmax_a + kappa kmax^2 + 3 eps max|grad v|^2 kmax^2
/// (+ the diffusive scale (2 nu + sqrt(eps) + mu) kmax^2 for rk4).
double cfl_step(const State& s, const QnsParams& params, const IntegratorConfig& config);

enum class RunStatus { Completed, PositivityFailure, StepUnderflow };

const char* to_string(RunStatus s);

struct Trajectory {
  Formulation formulation = Formulation::ApproxU;
  Scheme scheme = Scheme::Imex;
  int monitor_every = 1;
  /// u-form states at the monitor samples (empty unless keep_snapshots).
  std::vector<State> snapshots;
  std::vector<MonitorRecord> records;
  /// Trapezoid-in-time integrals of the dissipation vocabulary.
  DissipationMap accumulated;
  RunStatus status = RunStatus::Completed;
  std::string message;
  std::size_t steps = 0;
  double final_time = 0.0;
  double failure_time = 0.0;
  double failure_rho_min = 0.0;
  std::size_t failure_nodes = 0;
  /// Last state reached (formulation's own velocity form).
  State final_state;

  double max_mass_balance_residual() const;
};

/// Advances `initial` (u-form; converted to w-form when the formulation needs it)
/// to t_end. The initial state is 2/3-truncated first when dealiasing is on.
/// Constraint checking follows params.strict_mode (AdmissibilityError).
Trajectory integrate(const State& initial, const QnsParams& params, const IntegratorConfig& config);

void write_monitor_csv(std::ostream& os, const std::vector<MonitorRecord>& records);

struct EnergyBudgetReport {
  std::vector<double> times;      // step midpoints
  std::vector<double> residuals;  // (E_{n+1} - E_n)/dt - (P_n + P_{n+1})/2
  double max_abs_residual = 0.0;
};

/// Energy used for the budget: int (rho|u|^2/2 + a rho^gamma/(gamma-1) + 2 k^2 |grad v|^2).
double budget_energy(const State& s, const QnsParams& params);
/// Expected rate of change of budget_energy: minus the viscous and damping
/// dissipation plus the work of the regularization terms.
double budget_power(const State& s, const QnsParams& params, Formulation f = Formulation::ApproxU);

/// Requires an approx-u or target trajectory recorded with monitor_every == 1.
EnergyBudgetReport energy_budget(const Trajectory& traj, const QnsParams& params);

struct EquivalenceReport {
  RunStatus status_u = RunStatus::Completed;
  RunStatus status_w = RunStatus::Completed;
  std::string message;
  double max_rho_l2 = 0.0;
  double max_u_l2 = 0.0;
  std::size_t samples = 0;

  bool ok() const { return status_u == RunStatus::Completed && status_w == RunStatus::Completed; }
};

/// Runs approx-u and approx-w from matched data with a fixed step dt_init and
/// compares the w-run, mapped back through to_u, at every monitor sample.
EquivalenceReport equivalence_run(const State& initial, const QnsParams& params, IntegratorConfig config);

}  // namespace qns
