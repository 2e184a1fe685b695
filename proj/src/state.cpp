#include "qns/state.hpp"

#include <stdexcept>

#include "qns/calculus.hpp"
#include "qns/errors.hpp"

namespace qns {

const char* to_string(VelocityForm form) { return form == VelocityForm::U ? "u-form" : "w-form"; }

std::size_t count_nonpositive(const ScalarField& rho) {
  std::size_t bad = 0;
  for (double v : rho.values())
    if (!(v > 0.0)) ++bad;
  return bad;
}

void require_positive(const ScalarField& rho, const char* where) {
  if (const auto bad = count_nonpositive(rho); bad > 0) throw VacuumError(where, bad);
}

State make_state(ScalarField rho, VectorField vel, VelocityForm form, double time) {
  require_same_grid(rho.grid(), vel.grid(), "make_state");
  require_positive(rho, "make_state");
  return State{std::move(rho), std::move(vel), form, time};
}

namespace {

VectorField mu_grad_log(const ScalarField& rho, double mu) {
  return mu * grad(log(rho));
}

}  // namespace

State to_w(const State& s, const QnsParams& params) {
  if (s.form != VelocityForm::U) throw std::invalid_argument("to_w: state is not in u-form");
  require_positive(s.rho, "to_w");
  const double mu = params.mu();
  State out = s;
  out.form = VelocityForm::W;
  if (mu != 0.0) out.vel += mu_grad_log(s.rho, mu);
  return out;
}

State to_u(const State& s, const QnsParams& params) {
  if (s.form != VelocityForm::W) throw std::invalid_argument("to_u: state is not in w-form");
  require_positive(s.rho, "to_u");
  const double mu = params.mu();
  State out = s;
  out.form = VelocityForm::U;
  if (mu != 0.0) out.vel -= mu_grad_log(s.rho, mu);
  return out;
}

VectorField fluid_velocity(const State& s, const QnsParams& params) {
  return s.form == VelocityForm::U ? s.vel : to_u(s, params).vel;
}

}  // namespace qns
