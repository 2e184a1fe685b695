#pragma once

#include <cstdint>

#include "qns/field.hpp"

namespace qns {

/// Truncated random Fourier series with integer modes |m_a| <= modes.
///
/// Coefficients are standard normal draws weighted by 1/(1 + |m|^2) and the
/// series is normalized so its pointwise variance equals amplitude^2.
/// Deterministic per seed. Throws if 3 * modes > n on any axis.
ScalarField random_smooth(const Grid& grid, std::uint64_t seed, int modes, double amplitude = 1.0);

/// floor + s^2 with s = random_smooth(grid, seed, modes, amplitude).
ScalarField random_smooth_positive(const Grid& grid, std::uint64_t seed, int modes, double floor,
                                   double amplitude = 1.0);

/// One random_smooth component per axis, seeds derived from `seed`.
VectorField random_smooth_vector(const Grid& grid, std::uint64_t seed, int modes,
                                 double amplitude = 1.0);

}  // namespace qns
