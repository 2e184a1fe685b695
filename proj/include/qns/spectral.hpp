#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "qns/field.hpp"

namespace qns {

using Complex = std::complex<double>;

/// One Fourier mode of the real-to-complex layout.
struct WaveVector {
  std::array<double, Grid::kMaxDim> k{0.0, 0.0, 0.0};   // physical wavenumber 2*pi*m/L
  std::array<int, Grid::kMaxDim> m{0, 0, 0};            // signed integer mode
  std::array<bool, Grid::kMaxDim> nyquist{false, false, false};
  double k2 = 0.0;
};

/// FFTW-backed real-to-complex transform pair for one grid shape.
///
/// Instances are cached per grid and shared; all methods are const and safe to
/// call concurrently (plans are executed through the new-array interface).
class SpectralBasis {
 public:
  static const SpectralBasis& for_grid(const Grid& grid);

  explicit SpectralBasis(const Grid& grid);
  ~SpectralBasis();
  SpectralBasis(const SpectralBasis&) = delete;
  SpectralBasis& operator=(const SpectralBasis&) = delete;

  const Grid& grid() const { return grid_; }
  std::size_t complex_size() const { return waves_.size(); }
  const WaveVector& wave(std::size_t c) const { return waves_[c]; }

  std::vector<Complex> forward(const ScalarField& f) const;
  /// Normalized inverse; `spectrum` is consumed.
  ScalarField inverse(std::vector<Complex> spectrum) const;

  /// Multiplies every mode by `symbol(wave)` and transforms back.
  template <class Symbol>
  ScalarField apply(const ScalarField& f, Symbol&& symbol) const {
    auto s = forward(f);
    for (std::size_t c = 0; c < s.size(); ++c) s[c] *= symbol(waves_[c]);
    return inverse(std::move(s));
  }

  /// True when mode `w` survives the 2/3 truncation.
  bool retained(const WaveVector& w) const;

 private:
  struct Plans;
  Grid grid_;
  std::vector<WaveVector> waves_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace qns
