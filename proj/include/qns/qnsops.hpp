#pragma once

#include "qns/field.hpp"

namespace qns {

/// Algebraic route used to evaluate the Bohm force 2 rho grad(lap(sqrt rho) / sqrt rho).
enum class BohmForm {
  Quotient,          ///< 2 rho grad(lap v / v), v = sqrt(rho)
  HessianLog,        ///< div(rho hess(log rho))
  LaplacianOfGrad,   ///< grad lap rho - 4 div(grad v (x) grad v)
};

const char* to_string(BohmForm form);

/// Each form is coded independently; they agree on resolved fields.
/// Throws VacuumError for nonpositive rho.
VectorField bohm_force(const ScalarField& rho, BohmForm form = BohmForm::Quotient);

/// |grad v|^2 grad v.
VectorField p_flux(const ScalarField& v);

/// div(|grad v|^2 grad v) expanded as |grad v|^2 lap v + 2 grad v . hess v . grad v.
ScalarField p_flux_div(const ScalarField& v);

}  // namespace qns
