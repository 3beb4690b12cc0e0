#include "atmocirc/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace atmocirc {

namespace {
// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FourierX1::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

FourierX1::FourierX1(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int n = grid.n1();
  const int rows = grid.n2();
  const int m = modes();
  std::lock_guard lock(planner_mutex());
  plans_->real = fftw_alloc_real(std::size_t(n) * rows);
  plans_->spec = fftw_alloc_complex(std::size_t(m) * rows);
  int len[] = {n};
  plans_->r2c = fftw_plan_many_dft_r2c(1, len, rows, plans_->real, nullptr, 1, n, plans_->spec,
                                       nullptr, 1, m, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_many_dft_c2r(1, len, rows, plans_->spec, nullptr, 1, m, plans_->real,
                                       nullptr, 1, n, FFTW_ESTIMATE);
}

FourierX1::~FourierX1() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
  fftw_free(plans_->real);
  fftw_free(plans_->spec);
}

Spectrum FourierX1::forward(const ScalarField& f) const {
  require_same_grid(grid_, f.grid());
  auto v = f.values();
  std::copy(v.begin(), v.end(), plans_->real);
  fftw_execute(plans_->r2c);
  Spectrum out(grid_.n2(), modes());
  static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
  std::memcpy(static_cast<void*>(out.data().data()), plans_->spec, out.data().size_bytes());
  return out;
}

ScalarField FourierX1::inverse(const Spectrum& s, Boundary bc) const {
  std::memcpy(plans_->spec, s.data().data(), s.data().size_bytes());
  // c2r ignores the imaginary part of the mean and Nyquist coefficients.
  fftw_execute(plans_->c2r);
  ScalarField out(grid_, bc);
  auto v = out.values();
  const double scale = 1.0 / grid_.n1();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = plans_->real[n] * scale;
  return out;
}

}  // namespace atmocirc
