#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qns/field.hpp"
#include "qns/params.hpp"
#include "qns/state.hpp"
#include "qns/timeloop.hpp"

namespace qns {

/// Possibly-vacuum initial data: density and momentum.
struct RawData {
  ScalarField rho0;
  VectorField m0;

  /// Momentum magnitude allowed on nodes where rho0 == 0.
  static constexpr double kVacuumMomentumTol = 1e-12;

  /// Throws std::invalid_argument: negative or nonfinite rho0, grid mismatch,
  /// momentum on the vacuum set.
  void validate() const;
};

/// Density floor of the mollifier, eps^(4 sigma0).
double mollifier_floor(double eps, double sigma0);

/// Low-pass cutoff min(ceil(eps^-sigma0), floor(n_min / 3)).
int mollifier_cutoff(const Grid& grid, double eps, double sigma0);

/// Smooth strictly positive u-form data from `raw`:
///   rho~ = max(lowpass(rho0), 0),  rho = (rho~^6 + eps^(24 sigma0))^(1/6),
///   m~ = lowpass(rho0^(-1/2) m0, 0 on vacuum),  u = rho^(-1/2) m~.
/// Uses params.sigma0. Throws std::invalid_argument for eps <= 0 or invalid raw data.
State mollify(const RawData& raw, double eps, const QnsParams& params);

/// Raw data of a positive state (m0 = rho u).
RawData raw_from_state(const State& s, const QnsParams& params);

struct Scenario {
  std::string name;
  std::string description;
  Grid grid;
  QnsParams params;
  IntegratorConfig integrator;
  /// Data vanishes somewhere; runs must pass through mollify.
  bool needs_mollifier = false;
};

const std::vector<std::string>& scenario_names();

/// Recommended setup. Throws ConfigError for unknown names.
Scenario scenario(const std::string& name);

/// Closed-form data of scenario `name` sampled on `grid`. 1D scenarios use
/// the first axis, 2D scenarios require dim >= 2. Throws ConfigError.
RawData scenario_data(const std::string& name, const Grid& grid);

/// Ready-to-integrate state: positive data is used directly, vacuum data is
/// mollified at params.eps.
State scenario_state(const std::string& name, const Grid& grid, const QnsParams& params);

struct InitialReport {
  std::vector<std::pair<std::string, double>> norms;
  bool all_finite = true;

  double get(const std::string& name) const;
};

/// Norms bounding the initial data: r0_log_minus_l1, rho_l1, rho_lgamma,
/// grad_sqrt_rho_l2, eps_grad_sqrt_rho_l4_4, eps_rho_negpow_l1, kinetic,
/// sqrt_rho_l2eta, sqrt_rho_u_l2eta (exponent 2 + eta).
InitialReport validate_initial(const State& s, const QnsParams& params, double eta = 0.5);

}  // namespace qns
