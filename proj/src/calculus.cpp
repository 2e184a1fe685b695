#include "qns/calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "qns/spectral.hpp"

namespace qns {

VectorField Differentiator::gradient(const ScalarField& f) const {
  VectorField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) out[a] = derivative(f, a);
  return out;
}

ScalarField Differentiator::divergence(const VectorField& F) const {
  ScalarField out(F.grid());
  for (int a = 0; a < F.dim(); ++a) out += derivative(F[a], a);
  return out;
}

ScalarField Differentiator::laplacian(const ScalarField& f) const {
  ScalarField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) out += second_derivative(f, a, a);
  return out;
}

TensorField Differentiator::hessian(const ScalarField& f) const {
  const int d = f.grid().dim();
  TensorField out(f.grid(), 0.0, true);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      out(a, b) = second_derivative(f, a, b);
      if (b != a) out(b, a) = out(a, b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Complex first_symbol(const WaveVector& w, int axis) {
  if (w.nyquist[axis]) return {0.0, 0.0};
  return {0.0, w.k[axis]};
}

Complex second_symbol(const WaveVector& w, int a, int b) {
  if (a == b) return {-w.k[a] * w.k[a], 0.0};
  if (w.nyquist[a] || w.nyquist[b]) return {0.0, 0.0};
  return {-w.k[a] * w.k[b], 0.0};
}

}  // namespace

ScalarField SpectralDifferentiator::derivative(const ScalarField& f, int axis) const {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  return basis.apply(f, [axis](const WaveVector& w) { return first_symbol(w, axis); });
}

ScalarField SpectralDifferentiator::second_derivative(const ScalarField& f, int a, int b) const {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  return basis.apply(f, [a, b](const WaveVector& w) { return second_symbol(w, a, b); });
}

VectorField SpectralDifferentiator::gradient(const ScalarField& f) const {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  const auto s = basis.forward(f);
  VectorField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) {
    auto t = s;
    for (std::size_t c = 0; c < t.size(); ++c) t[c] *= first_symbol(basis.wave(c), a);
    out[a] = basis.inverse(std::move(t));
  }
  return out;
}

ScalarField SpectralDifferentiator::divergence(const VectorField& F) const {
  const auto& basis = SpectralBasis::for_grid(F.grid());
  std::vector<Complex> acc(basis.complex_size(), Complex{});
  for (int a = 0; a < F.dim(); ++a) {
    const auto s = basis.forward(F[a]);
    for (std::size_t c = 0; c < s.size(); ++c) acc[c] += s[c] * first_symbol(basis.wave(c), a);
  }
  return basis.inverse(std::move(acc));
}

ScalarField SpectralDifferentiator::laplacian(const ScalarField& f) const {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  return basis.apply(f, [](const WaveVector& w) { return Complex(-w.k2, 0.0); });
}

TensorField SpectralDifferentiator::hessian(const ScalarField& f) const {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  const auto s = basis.forward(f);
  const int d = f.grid().dim();
  TensorField out(f.grid(), 0.0, true);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      auto t = s;
      for (std::size_t c = 0; c < t.size(); ++c) t[c] *= second_symbol(basis.wave(c), a, b);
      out(a, b) = basis.inverse(std::move(t));
      if (b != a) out(b, a) = out(a, b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ScalarField FiniteDifferenceDifferentiator::derivative(const ScalarField& f, int axis) const {
  const Grid& g = f.grid();
  const auto n = static_cast<std::size_t>(g.n(axis));
  const std::size_t stride = g.stride(axis);
  const double inv2h = 0.5 / g.spacing(axis);
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t j = (i / stride) % n;
    const std::size_t base = i - j * stride;
    const std::size_t ip = base + ((j + 1) % n) * stride;
    const std::size_t im = base + ((j + n - 1) % n) * stride;
    out[i] = (f[ip] - f[im]) * inv2h;
  }
  return out;
}

ScalarField FiniteDifferenceDifferentiator::second_derivative(const ScalarField& f, int a,
                                                              int b) const {
  if (a != b) return derivative(derivative(f, b), a);
  const Grid& g = f.grid();
  const auto n = static_cast<std::size_t>(g.n(a));
  const std::size_t stride = g.stride(a);
  const double invh2 = 1.0 / (g.spacing(a) * g.spacing(a));
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t j = (i / stride) % n;
    const std::size_t base = i - j * stride;
    const std::size_t ip = base + ((j + 1) % n) * stride;
    const std::size_t im = base + ((j + n - 1) % n) * stride;
    out[i] = (f[ip] - 2.0 * f[i] + f[im]) * invh2;
  }
  return out;
}

const Differentiator& spectral() {
  static const SpectralDifferentiator instance;
  return instance;
}

const Differentiator& finite_difference() {
  static const FiniteDifferenceDifferentiator instance;
  return instance;
}

// ---------------------------------------------------------------------------

VectorField grad(const ScalarField& f, const Differentiator& d) { return d.gradient(f); }
ScalarField div(const VectorField& F, const Differentiator& d) { return d.divergence(F); }
ScalarField laplacian(const ScalarField& f, const Differentiator& d) { return d.laplacian(f); }
TensorField hessian(const ScalarField& f, const Differentiator& d) { return d.hessian(f); }

TensorField grad_vec(const VectorField& F, const Differentiator& d) {
  TensorField out(F.grid());
  for (int i = 0; i < F.dim(); ++i) {
    const VectorField gi = d.gradient(F[i]);
    for (int j = 0; j < F.dim(); ++j) out(i, j) = gi[j];
  }
  return out;
}

TensorField sym_grad(const VectorField& F, const Differentiator& d) {
  const TensorField g = grad_vec(F, d);
  TensorField out(F.grid(), 0.0, true);
  for (int i = 0; i < F.dim(); ++i) {
    for (int j = i; j < F.dim(); ++j) {
      out(i, j) = 0.5 * (g(i, j) + g(j, i));
      if (j != i) out(j, i) = out(i, j);
    }
  }
  return out;
}

VectorField div_tensor(const TensorField& T, const Differentiator& d) {
  VectorField out(T.grid());
  for (int i = 0; i < T.dim(); ++i) {
    VectorField row(T.grid());
    for (int j = 0; j < T.dim(); ++j) row[j] = T(i, j);
    out[i] = d.divergence(row);
  }
  return out;
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.grid().cell_volume();
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p) && p > 0) return f.max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
  double sum = 0.0;
  for (double v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double l2_norm(const VectorField& F) {
  double s = 0.0;
  for (int i = 0; i < F.dim(); ++i) s += integrate(F[i] * F[i]);
  return std::sqrt(s);
}

double l2_norm(const ScalarField& f) { return std::sqrt(integrate(f * f)); }

ScalarField dealias(const ScalarField& f) {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  return basis.apply(f, [&basis](const WaveVector& w) {
    return basis.retained(w) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  });
}

VectorField dealias(const VectorField& F) {
  VectorField out = F;
  for (int i = 0; i < F.dim(); ++i) out[i] = dealias(F[i]);
  return out;
}

ScalarField lowpass(const ScalarField& f, int cutoff) {
  const auto& basis = SpectralBasis::for_grid(f.grid());
  const int d = f.grid().dim();
  return basis.apply(f, [cutoff, d](const WaveVector& w) {
    for (int a = 0; a < d; ++a) {
      if (std::abs(w.m[a]) > cutoff) return Complex(0.0, 0.0);
    }
    return Complex(1.0, 0.0);
  });
}

}  // namespace qns
