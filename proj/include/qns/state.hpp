#pragma once

#include "qns/field.hpp"
#include "qns/params.hpp"

namespace qns {

/// Which velocity a State carries: the fluid velocity u or the effective
/// velocity w = u + mu grad log rho.
enum class VelocityForm { U, W };

const char* to_string(VelocityForm form);

struct State {
  ScalarField rho;
  VectorField vel;
  VelocityForm form = VelocityForm::U;
  double time = 0.0;

  const Grid& grid() const { return rho.grid(); }
};

/// Builds a state after checking rho > 0 at every node and that rho and vel
/// share a grid. Throws VacuumError / GridMismatch.
State make_state(ScalarField rho, VectorField vel, VelocityForm form = VelocityForm::U,
                 double time = 0.0);

/// Number of nodes with rho <= 0 (or NaN).
std::size_t count_nonpositive(const ScalarField& rho);
void require_positive(const ScalarField& rho, const char* where);

/// u-form -> w-form: w = u + mu grad log rho.
State to_w(const State& s, const QnsParams& params);
/// w-form -> u-form: u = w - mu grad log rho.
State to_u(const State& s, const QnsParams& params);
/// Velocity of `s` expressed as u regardless of its form.
VectorField fluid_velocity(const State& s, const QnsParams& params);

}  // namespace qns
