#pragma once

#include <limits>

#include "qns/field.hpp"

namespace qns {

/// Periodic differentiation backend.
///
/// Tensor conventions used throughout: grad_vec(F)(i, j) = d_j F_i and
/// div_tensor(T)_i = sum_j d_j T(i, j).
class Differentiator {
 public:
  virtual ~Differentiator() = default;

  virtual ScalarField derivative(const ScalarField& f, int axis) const = 0;
  /// d_a d_b f; a == b gives the pure second derivative.
  virtual ScalarField second_derivative(const ScalarField& f, int a, int b) const = 0;
  virtual VectorField gradient(const ScalarField& f) const;
  virtual ScalarField divergence(const VectorField& F) const;
  virtual ScalarField laplacian(const ScalarField& f) const;
  virtual TensorField hessian(const ScalarField& f) const;
};

/// Fourier collocation; exact on trigonometric polynomials the grid resolves.
/// Odd derivatives drop the Nyquist mode of the differentiated axis.
class SpectralDifferentiator final : public Differentiator {
 public:
  ScalarField derivative(const ScalarField& f, int axis) const override;
  ScalarField second_derivative(const ScalarField& f, int a, int b) const override;
  VectorField gradient(const ScalarField& f) const override;
  ScalarField divergence(const VectorField& F) const override;
  ScalarField laplacian(const ScalarField& f) const override;
  TensorField hessian(const ScalarField& f) const override;
};

/// Second-order centered differences, used as a cross-check backend.
class FiniteDifferenceDifferentiator final : public Differentiator {
 public:
  ScalarField derivative(const ScalarField& f, int axis) const override;
  ScalarField second_derivative(const ScalarField& f, int a, int b) const override;
};

const Differentiator& spectral();
const Differentiator& finite_difference();

VectorField grad(const ScalarField& f, const Differentiator& d = spectral());
ScalarField div(const VectorField& F, const Differentiator& d = spectral());
ScalarField laplacian(const ScalarField& f, const Differentiator& d = spectral());
TensorField hessian(const ScalarField& f, const Differentiator& d = spectral());
TensorField grad_vec(const VectorField& F, const Differentiator& d = spectral());
/// D F = (grad F + grad F^T) / 2.
TensorField sym_grad(const VectorField& F, const Differentiator& d = spectral());
VectorField div_tensor(const TensorField& T, const Differentiator& d = spectral());

/// Rectangle rule: mean nodal value times domain volume.
double integrate(const ScalarField& f);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();
/// (integral |f|^p)^(1/p); p == kInfinityNorm gives the max nodal magnitude.
double lp_norm(const ScalarField& f, double p);
/// Sum over components of squared L2 norms, then the root.
double l2_norm(const VectorField& F);
double l2_norm(const ScalarField& f);

/// Zeroes every mode above 2/3 of the Nyquist wavenumber on any axis.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& F);
/// Keeps integer modes with |m_a| <= cutoff on every axis.
ScalarField lowpass(const ScalarField& f, int cutoff);

}  // namespace qns
