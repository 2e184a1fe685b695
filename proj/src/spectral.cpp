#include "qns/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace qns {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T, FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

struct SpectralBasis::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
};

SpectralBasis::SpectralBasis(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int d = grid.dim();
  int dims[Grid::kMaxDim];
  for (int a = 0; a < d; ++a) dims[a] = grid.n(a);

  std::size_t csize = 1;
  for (int a = 0; a < d - 1; ++a) csize *= static_cast<std::size_t>(grid.n(a));
  const int last_n = grid.n(d - 1) / 2 + 1;
  csize *= static_cast<std::size_t>(last_n);
  plans_->real_size = grid.size();
  plans_->complex_size = csize;

  waves_.resize(csize);
  for (std::size_t c = 0; c < csize; ++c) {
    WaveVector w;
    std::size_t rem = c;
    for (int a = d - 1; a >= 0; --a) {
      const int extent = (a == d - 1) ? last_n : grid.n(a);
      const int j = static_cast<int>(rem % static_cast<std::size_t>(extent));
      rem /= static_cast<std::size_t>(extent);
      const int n = grid.n(a);
      const int m = (j <= n / 2) ? j : j - n;
      w.m[a] = m;
      w.nyquist[a] = (j == n / 2);
      w.k[a] = 2.0 * std::numbers::pi * m / grid.length(a);
      w.k2 += w.k[a] * w.k[a];
    }
    waves_[c] = w;
  }

  auto in = fftw_buffer<double>(plans_->real_size);
  auto out = fftw_buffer<fftw_complex>(plans_->complex_size);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c(d, dims, in.get(), out.get(), FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r(d, dims, out.get(), in.get(), FFTW_ESTIMATE);
  if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("SpectralBasis: FFTW planning failed");
}

SpectralBasis::~SpectralBasis() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
  if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

const SpectralBasis& SpectralBasis::for_grid(const Grid& grid) {
  using Key = std::tuple<int, int, int, int, double, double, double>;
  static std::mutex cache_mutex;
  static std::map<Key, std::unique_ptr<SpectralBasis>> cache;
  const Key key{grid.dim(),       grid.n(0),        grid.n(1),       grid.n(2),
                grid.length(0),   grid.length(1),   grid.length(2)};
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<SpectralBasis>(grid)).first;
  return *it->second;
}

std::vector<Complex> SpectralBasis::forward(const ScalarField& f) const {
  require_same_grid(grid_, f.grid(), "SpectralBasis::forward");
  auto in = fftw_buffer<double>(plans_->real_size);
  auto out = fftw_buffer<fftw_complex>(plans_->complex_size);
  std::memcpy(in.get(), f.values().data(), sizeof(double) * plans_->real_size);
  fftw_execute_dft_r2c(plans_->r2c, in.get(), out.get());
  std::vector<Complex> s(plans_->complex_size);
  for (std::size_t c = 0; c < s.size(); ++c) s[c] = Complex(out.get()[c][0], out.get()[c][1]);
  return s;
}

ScalarField SpectralBasis::inverse(std::vector<Complex> spectrum) const {
  auto in = fftw_buffer<fftw_complex>(plans_->complex_size);
  auto out = fftw_buffer<double>(plans_->real_size);
  for (std::size_t c = 0; c < spectrum.size(); ++c) {
    in.get()[c][0] = spectrum[c].real();
    in.get()[c][1] = spectrum[c].imag();
  }
  fftw_execute_dft_c2r(plans_->c2r, in.get(), out.get());
  const double scale = 1.0 / static_cast<double>(plans_->real_size);
  std::vector<double> values(plans_->real_size);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = out.get()[i] * scale;
  return ScalarField(grid_, std::move(values));
}

bool SpectralBasis::retained(const WaveVector& w) const {
  for (int a = 0; a < grid_.dim(); ++a) {
    if (3 * std::abs(w.m[a]) > grid_.n(a)) return false;
  }
  return true;
}

}  // namespace qns
