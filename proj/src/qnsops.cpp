#include "qns/qnsops.hpp"

#include "qns/calculus.hpp"
#include "qns/state.hpp"

namespace qns {

const char* to_string(BohmForm form) {
  switch (form) {
    case BohmForm::Quotient: return "A";
    case BohmForm::HessianLog: return "B";
    case BohmForm::LaplacianOfGrad: return "C";
  }
  return "?";
}

VectorField bohm_force(const ScalarField& rho, BohmForm form) {
  require_positive(rho, "bohm_force");
  switch (form) {
    case BohmForm::Quotient: {
      const ScalarField v = sqrt(rho);
      const ScalarField q = laplacian(v) / v;
      return (2.0 * rho) * grad(q);
    }
    case BohmForm::HessianLog: {
      const TensorField h = hessian(log(rho));
      return div_tensor(rho * h);
    }
    case BohmForm::LaplacianOfGrad: {
      const ScalarField v = sqrt(rho);
      const VectorField gv = grad(v);
      TensorField gg = outer(gv, gv);
      gg.mark_symmetric(true);
      return grad(laplacian(rho)) - 4.0 * div_tensor(gg);
    }
  }
  return VectorField(rho.grid());
}

VectorField p_flux(const ScalarField& v) {
  const VectorField gv = grad(v);
  return norm2(gv) * gv;
}

ScalarField p_flux_div(const ScalarField& v) {
  const VectorField gv = grad(v);
  const TensorField h = hessian(v);
  ScalarField lap(v.grid());
  for (int a = 0; a < v.grid().dim(); ++a) lap += h(a, a);
  return norm2(gv) * lap + 2.0 * dot(gv, mat_vec(h, gv));
}

}  // namespace qns
