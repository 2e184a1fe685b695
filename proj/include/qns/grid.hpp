#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qns {

/// Uniform periodic lattice on [0, L_0) x ... x [0, L_{d-1}).
///
/// Nodes are stored row-major with the last axis fastest. Node j on axis a
/// sits at x = j * spacing(a); there is no ghost layer.
class Grid {
 public:
  static constexpr int kMaxDim = 3;

  Grid() = default;
  Grid(int dim, std::array<int, kMaxDim> n, std::array<double, kMaxDim> length);

  /// Cubic grid with the same node count and extent on every axis.
  static Grid cube(int dim, int n, double length = 2.0 * std::numbers::pi);

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double length(int axis) const { return length_[axis]; }
  double spacing(int axis) const { return length_[axis] / n_[axis]; }
  std::size_t size() const { return size_; }
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(size_); }

  /// Coordinate of node `index` along `axis`.
  double coord(std::size_t index, int axis) const;
  /// Per-axis integer position of a flat node index.
  std::array<int, kMaxDim> position(std::size_t index) const;
  std::size_t stride(int axis) const { return stride_[axis]; }

  std::string describe() const;

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  int dim_ = 1;
  std::array<int, kMaxDim> n_{8, 1, 1};
  std::array<double, kMaxDim> length_{2.0 * std::numbers::pi, 1.0, 1.0};
  std::array<std::size_t, kMaxDim> stride_{1, 1, 1};
  std::size_t size_ = 8;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace qns
