#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qns/field.hpp"
#include "qns/params.hpp"
#include "qns/qnsops.hpp"
#include "qns/state.hpp"

namespace qns {

enum class Formulation { Target, ApproxU, ApproxW };

const char* to_string(Formulation f);
Formulation parse_formulation(const std::string& s);
/// Velocity form a formulation evolves.
VelocityForm velocity_form(Formulation f);

/// Labeled contributions. Momentum terms are contributions to rho * d(vel)/dt.
struct TermBreakdown {
  std::vector<std::pair<std::string, ScalarField>> mass;
  std::vector<std::pair<std::string, VectorField>> momentum;

  const VectorField* find_momentum(const std::string& label) const;
  const ScalarField* find_mass(const std::string& label) const;
  VectorField momentum_sum() const;
  ScalarField mass_sum() const;
};

struct Rhs {
  ScalarField drho;
  VectorField dvel;
  Formulation formulation = Formulation::Target;
  /// Populated only when requested through RhsOptions.
  TermBreakdown breakdown;
};

struct RhsOptions {
  /// 2/3-rule truncation of the assembled drho and dvel.
  bool dealias = true;
  bool breakdown = false;
  BohmForm bohm = BohmForm::Quotient;
};

/// Momentum vocabulary: convection, viscous, pressure, bohm, damping-r0,
/// damping-r1, then the regularization terms eps-viscous, eps-bohm,
/// eps-pflux-convection, eps-pflux-hesslog, eps-rhopow-drag, eps-cubic-drag,
/// eps-rhopow-grad, eps-pflux-grad, eps-pflux-log. Mass vocabulary:
/// transport, eps-source (eps v div(|grad v|^2 grad v)), eps-rhopow (eps rho^-p0)
/// and, in w-form, mu-diffusion.
Rhs rhs_target(const State& s, const QnsParams& params, const RhsOptions& opts = {});
Rhs rhs_approx_u(const State& s, const QnsParams& params, const RhsOptions& opts = {});
/// w-form momentum vocabulary: convection, pressure, viscous, mu-laplacian,
/// eps-viscous, mu-gradrho, eps-pflux-convection, eps-cubic-drag, damping-r0,
/// damping-r1, eps-rhopow-drag. No operator above second order is applied.
Rhs rhs_approx_w(const State& s, const QnsParams& params, const RhsOptions& opts = {});

Rhs evaluate_rhs(Formulation f, const State& s, const QnsParams& params, const RhsOptions& opts = {});

/// (d rho/dt, d u/dt) implied by a w-form right-hand side:
/// u_t = w_t - mu grad(rho_t / rho).
std::pair<ScalarField, VectorField> implied_u_rates(const State& w_state, const Rhs& w_rhs,
                                                    const QnsParams& params);

/// phi(x, t) = amplitude * cos^2(pi t / (2T)) * cos(k . x + phase) e_component,
/// with integer mode vector k in units of 2 pi / L. Vanishes at t = T.
struct TestFunctionSpec {
  std::array<int, 3> mode{1, 0, 0};
  int component = 0;
  double amplitude = 1.0;
  double phase = 0.0;
  double horizon = 1.0;
};

/// Residual of the weak momentum identity for a u-form trajectory sampled
/// at uniform times starting at 0: left side minus right side, via rectangle
/// quadrature in space and the trapezoid rule in time. Returns |residual|.
/// The horizon of `phi` is replaced by the last sample time.
double weak_residual(const std::vector<State>& trajectory, const TestFunctionSpec& phi, const QnsParams& params);

}  // namespace qns
