#pragma once

/// @file spectral.hpp
/// @brief Real Fourier transforms along x1 for every x2 row of a field.

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "atmocirc/fields.hpp"

namespace atmocirc {

/// Row-wise half-spectrum: `modes()` complex coefficients per x2 row,
/// stored row-major (row j, mode k at j*modes() + k).
class Spectrum {
 public:
  Spectrum(int rows, int modes) : rows_(rows), modes_(modes), c_(std::size_t(rows) * modes) {}

  int rows() const noexcept { return rows_; }
  int modes() const noexcept { return modes_; }
  std::complex<double>& operator()(int k, int j) noexcept { return c_[std::size_t(j) * modes_ + k]; }
  std::complex<double> operator()(int k, int j) const noexcept {
    return c_[std::size_t(j) * modes_ + k];
  }
  std::span<std::complex<double>> data() noexcept { return c_; }
  std::span<const std::complex<double>> data() const noexcept { return c_; }

 private:
  int rows_;
  int modes_;
  std::vector<std::complex<double>> c_;
};

/// Batched r2c/c2r transforms of length n1 over n2 rows. Forward is
/// unnormalized; inverse divides by n1 so inverse(forward(f)) == f.
///
/// Plans are created once; execution uses internal buffers, so a single
/// instance must not be used from several threads at once.
class FourierX1 {
 public:
  explicit FourierX1(const Grid& grid);
  ~FourierX1();
  FourierX1(const FourierX1&) = delete;
  FourierX1& operator=(const FourierX1&) = delete;

  const Grid& grid() const noexcept { return grid_; }
  int modes() const noexcept { return grid_.n1() / 2 + 1; }

  Spectrum forward(const ScalarField& f) const;
  /// Returns a field with boundary flag `bc`; wall rows are not touched.
  ScalarField inverse(const Spectrum& s, Boundary bc = Boundary::free) const;

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace atmocirc
