#pragma once

#include <map>
#include <string>
#include <vector>

#include "qns/field.hpp"
#include "qns/params.hpp"
#include "qns/state.hpp"

namespace qns {

/// Outcome of one inequality or identity check.
///
/// Inequality: passed iff lhs <= rhs * (1 + rel_tol) + abs_tol.
/// Identity:   passed iff |lhs - rhs| <= rel_tol * max(|lhs|, |rhs|) + abs_tol.
struct FunctionalReport {
  enum class Kind { Inequality, Identity };

  std::string name;
  Kind kind = Kind::Inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool passed = false;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;

  static FunctionalReport inequality(std::string name, double lhs, double rhs, double rel_tol = 1e-10,
                                     double abs_tol = 1e-12);
  static FunctionalReport identity(std::string name, double lhs, double rhs, double rel_tol,
                                   double abs_tol = 1e-12);

  /// |lhs - rhs| relative to max(|lhs|, |rhs|), 0 when both vanish.
  double relative_gap() const;
};

const char* to_string(FunctionalReport::Kind kind);

/// Integrated pieces of the energy bracket
///   rho|u|^2 + rho + rho^gamma + eps rho^-p0 + (2k^2 + 2 mu sqrt(eps))|grad v|^2 + eps mu |grad v|^4.
struct EnergyParts {
  double kinetic = 0.0;
  double mass = 0.0;
  double pressure = 0.0;
  double eps_negpow = 0.0;
  double gradient = 0.0;
  double eps_quartic = 0.0;

  double total() const;
  /// The kappa/mu-weighted gradient terms alone.
  double kappa_bracket() const;
};

EnergyParts energy_parts(const State& s, const QnsParams& params);
double energy(const State& s, const QnsParams& params);

/// int (|grad v|^2 + eps |grad v|^4 - r0 log_- rho), log_- rho = min(log rho, 0).
double bd_entropy(const State& s, const QnsParams& params);

/// int rho (e + |u|^2) ln(e + |u|^2).
double mv_functional(const State& s, const QnsParams& params);

/// Dissipation vocabulary in monitor column order.
const std::vector<std::string>& dissipation_vocabulary();

using DissipationMap = std::map<std::string, double>;

/// Instantaneous dissipation integrals keyed by the vocabulary.
DissipationMap energy_dissipation(const State& s, const QnsParams& params);

/// int |grad rho^(1/4)|^4 <= 8 int rho |hess log rho|^2 and
/// int |hess rho^(1/2)|^2 <= 7 int rho |hess log rho|^2.
std::vector<FunctionalReport> check_jungel(const ScalarField& rho);

/// int v^-2 |grad v|^6 <= 2 int |grad v|^2 |lap v|^2 + 8 int |grad |grad v|^2|^2.
FunctionalReport check_grad6(const ScalarField& v);

/// int rho (div u)^2 <= 3 int rho |D u|^2.
FunctionalReport check_div_vs_D(const ScalarField& rho, const VectorField& u);

/// int div(|grad v|^r grad v) div(|grad v|^2 grad v) against its expanded
/// right-hand side. Identity with relative tolerance 1e-8.
FunctionalReport check_flux_identity(const ScalarField& v, double r);

/// max_x |grad(sqrt(rho) u) - sqrt(rho) grad u - 2 rho^(1/4) u (x) grad rho^(1/4)|,
/// scaled by 1 + max |grad(sqrt(rho) u)|. lhs is that discrepancy, rhs the tolerance 1e-8.
FunctionalReport check_grad_sqrtrho_u(const ScalarField& rho, const VectorField& u);

/// One time sample of every monitored quantity.
struct MonitorRecord {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double bd_entropy = 0.0;
  double mv = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double mass_balance_residual = 0.0;
  DissipationMap dissipation;

  bool all_finite() const;
};

MonitorRecord make_monitor_record(const State& s, const QnsParams& params);

/// Fixed monitor CSV header and row formatting (%.17g).
std::string monitor_csv_header();
std::string monitor_csv_row(const MonitorRecord& r);

}  // namespace qns
