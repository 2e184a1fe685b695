#include "qns/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qns {

ScalarField::ScalarField(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("ScalarField: value count " + std::to_string(values_.size()) +
                                " does not match grid node count " +
                                std::to_string(grid_.size()));
  }
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(double, double, double)>& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coord(i, a);
    out.values_[i] = f(x[0], x[1], x[2]);
  }
  return out;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField *=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double s) {
  for (double& v : values_) v += s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator+(ScalarField a, double s) { return a += s; }
ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField /");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] / b[i];
  return out;
}

ScalarField pow(const ScalarField& f, double p) {
  return f.map([p](double x) { return std::pow(x, p); });
}
ScalarField sqrt(const ScalarField& f) {
  return f.map([](double x) { return std::sqrt(x); });
}
ScalarField log(const ScalarField& f) {
  return f.map([](double x) { return std::log(x); });
}
ScalarField abs(const ScalarField& f) {
  return f.map([](double x) { return std::abs(x); });
}

// ---------------------------------------------------------------------------

VectorField::VectorField(const Grid& grid, double value) : grid_(grid) {
  components_.assign(static_cast<std::size_t>(grid.dim()), ScalarField(grid, value));
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("VectorField: no components");
  grid_ = components_.front().grid();
  if (static_cast<int>(components_.size()) != grid_.dim()) {
    throw std::invalid_argument("VectorField: component count must equal grid dimension");
  }
  for (const auto& c : components_) require_same_grid(grid_, c.grid(), "VectorField");
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

bool VectorField::all_finite() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarField& c) { return c.all_finite(); });
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < dim(); ++i) (*this)[i] += o[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < dim(); ++i) (*this)[i] -= o[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

VectorField operator*(const ScalarField& s, const VectorField& a) {
  VectorField out = a;
  for (int i = 0; i < a.dim(); ++i) out[i] *= s;
  return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  ScalarField out(a.grid());
  for (int i = 0; i < a.dim(); ++i) out += a[i] * b[i];
  return out;
}

ScalarField norm2(const VectorField& a) { return dot(a, a); }

// ---------------------------------------------------------------------------

TensorField::TensorField(const Grid& grid, double value, bool symmetric)
    : grid_(grid), dim_(grid.dim()), symmetric_(symmetric) {
  components_.assign(static_cast<std::size_t>(dim_ * dim_), ScalarField(grid, value));
}

double TensorField::asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) m = std::max(m, ((*this)(i, j) - (*this)(j, i)).max_abs());
  return m;
}

double TensorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

TensorField& TensorField::operator+=(const TensorField& o) {
  for (std::size_t k = 0; k < components_.size(); ++k) components_[k] += o.components_[k];
  symmetric_ = symmetric_ && o.symmetric_;
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  for (std::size_t k = 0; k < components_.size(); ++k) components_[k] -= o.components_[k];
  symmetric_ = symmetric_ && o.symmetric_;
  return *this;
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }

TensorField operator*(const ScalarField& s, const TensorField& t) {
  TensorField out = t;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out(i, j) *= s;
  return out;
}

TensorField operator*(double s, TensorField t) {
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) t(i, j) *= s;
  return t;
}

TensorField transpose(const TensorField& t) {
  TensorField out(t.grid(), 0.0, t.symmetric());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out(i, j) = t(j, i);
  return out;
}

TensorField outer(const VectorField& a, const VectorField& b) {
  TensorField out(a.grid());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out(i, j) = a[i] * b[j];
  return out;
}

ScalarField trace(const TensorField& t) {
  ScalarField out(t.grid());
  for (int i = 0; i < t.dim(); ++i) out += t(i, i);
  return out;
}

ScalarField contract(const TensorField& a, const TensorField& b) {
  ScalarField out(a.grid());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out += a(i, j) * b(i, j);
  return out;
}

ScalarField norm2(const TensorField& t) { return contract(t, t); }

VectorField mat_vec(const TensorField& t, const VectorField& f) {
  VectorField out(t.grid());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out[i] += t(i, j) * f[j];
  return out;
}

}  // namespace qns
