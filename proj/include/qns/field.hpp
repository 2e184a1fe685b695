#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qns/grid.hpp"

namespace qns {

/// Nodal samples of a real scalar on a periodic grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples f(x, y, z) at every node; unused coordinates are passed as 0.
  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(double, double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;

  template <class Fn>
  ScalarField map(Fn&& fn) const {
    ScalarField out(grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = fn(values_[i]);
    return out;
  }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double s);
  ScalarField& operator+=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(ScalarField a, double s);
ScalarField operator+(ScalarField a, double s);
ScalarField operator-(const ScalarField& a);

ScalarField pow(const ScalarField& f, double p);
ScalarField sqrt(const ScalarField& f);
ScalarField log(const ScalarField& f);
ScalarField abs(const ScalarField& f);

/// d scalar components sharing one grid.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double value = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  ScalarField& operator[](int i) { return components_[static_cast<std::size_t>(i)]; }

  double max_abs() const;
  bool all_finite() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);
/// Nodal scaling of every component by a scalar field.
VectorField operator*(const ScalarField& s, const VectorField& a);

ScalarField dot(const VectorField& a, const VectorField& b);
/// Nodal |F|^2.
ScalarField norm2(const VectorField& a);

/// dim x dim components; entry (i, j) for a velocity gradient is d_j u_i.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& grid, double value = 0.0, bool symmetric = false);

  const Grid& grid() const { return grid_; }
  int dim() const { return dim_; }
  bool symmetric() const { return symmetric_; }
  void mark_symmetric(bool s) { symmetric_ = s; }

  const ScalarField& operator()(int i, int j) const { return components_[index(i, j)]; }
  ScalarField& operator()(int i, int j) { return components_[index(i, j)]; }

  /// Largest nodal |T_ij - T_ji|.
  double asymmetry() const;
  double max_abs() const;

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * dim_ + j); }

  Grid grid_;
  int dim_ = 0;
  bool symmetric_ = false;
  std::vector<ScalarField> components_;
};

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator-(TensorField a, const TensorField& b);
TensorField operator*(const ScalarField& s, const TensorField& t);
TensorField operator*(double s, TensorField t);

TensorField transpose(const TensorField& t);
TensorField outer(const VectorField& a, const VectorField& b);
ScalarField trace(const TensorField& t);
/// Nodal A:B = sum_ij A_ij B_ij.
ScalarField contract(const TensorField& a, const TensorField& b);
/// Nodal |T|^2 (Frobenius).
ScalarField norm2(const TensorField& t);
/// (T F)_i = sum_j T_ij F_j.
VectorField mat_vec(const TensorField& t, const VectorField& f);

}  // namespace qns
