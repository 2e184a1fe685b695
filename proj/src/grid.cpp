#include "qns/grid.hpp"

#include <sstream>

namespace qns {

Grid::Grid(int dim, std::array<int, kMaxDim> n, std::array<double, kMaxDim> length)
    : dim_(dim), n_(n), length_(length) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("Grid: dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
  for (int a = 0; a < kMaxDim; ++a) {
    if (a < dim) {
      if (n_[a] < 8 || n_[a] % 2 != 0) {
        throw std::invalid_argument("Grid: node count per axis must be even and >= 8, got " +
                                    std::to_string(n_[a]) + " on axis " + std::to_string(a));
      }
      if (!(length_[a] > 0.0)) {
        throw std::invalid_argument("Grid: domain extent must be positive on axis " +
                                    std::to_string(a));
      }
    } else {
      n_[a] = 1;
      length_[a] = 1.0;
    }
  }
  size_ = 1;
  for (int a = kMaxDim - 1; a >= 0; --a) {
    stride_[a] = size_;
    size_ *= static_cast<std::size_t>(n_[a]);
  }
}

Grid Grid::cube(int dim, int n, double length) {
  std::array<int, kMaxDim> ns{1, 1, 1};
  std::array<double, kMaxDim> ls{1.0, 1.0, 1.0};
  for (int a = 0; a < dim && a < kMaxDim; ++a) {
    ns[a] = n;
    ls[a] = length;
  }
  return Grid(dim, ns, ls);
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= length_[a];
  return v;
}

std::array<int, Grid::kMaxDim> Grid::position(std::size_t index) const {
  std::array<int, kMaxDim> p{0, 0, 0};
  for (int a = 0; a < kMaxDim; ++a) {
    p[a] = static_cast<int>((index / stride_[a]) % static_cast<std::size_t>(n_[a]));
  }
  return p;
}

double Grid::coord(std::size_t index, int axis) const {
  const auto j = (index / stride_[axis]) % static_cast<std::size_t>(n_[axis]);
  return static_cast<double>(j) * spacing(axis);
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dim_ << "D n=";
  for (int a = 0; a < dim_; ++a) os << (a ? "x" : "") << n_[a];
  os << " L=";
  for (int a = 0; a < dim_; ++a) os << (a ? "x" : "") << length_[a];
  return os.str();
}

bool operator==(const Grid& a, const Grid& b) {
  return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw GridMismatch(std::string(where) + ": fields live on different grids (" + a.describe() +
                       " vs " + b.describe() + ")");
  }
}

}  // namespace qns
