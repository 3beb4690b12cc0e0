#pragma once

/// @file operators.hpp
/// @brief Discrete gradient, divergence, Laplacian and advection on the channel grid.
///
/// x1 derivatives act on Fourier symbols (spectral, or the symbols of the
/// periodic centered stencils). x2 uses second-order centered differences.
///
/// The gradient uses one-sided second-order stencils on the walls. The
/// divergence is the negative adjoint of the gradient under the channel
/// quadrature (rectangle in x1, trapezoid in x2), which makes
///
///   <grad f, u> + <f, div u> = 0   whenever u2 vanishes on the walls.
///
/// On interior rows that adjoint is the centered stencil; on the walls it
/// reduces to a one-sided first difference. This identity is what makes the
/// skew-symmetric advection conserve energy and the pressure do no work.

#include <memory>
#include <utility>
#include <vector>

#include "atmocirc/fields.hpp"
#include "atmocirc/spectral.hpp"

namespace atmocirc {

enum class AdvectionForm { skew, advective };
enum class X1Method { fourier_spectral, centered2 };

struct OperatorConfig {
  AdvectionForm advection_form = AdvectionForm::skew;
  X1Method x1_method = X1Method::fourier_spectral;

  bool operator==(const OperatorConfig&) const = default;
};

class DifferentialOperators {
 public:
  explicit DifferentialOperators(const Grid& grid, OperatorConfig config = {});

  const Grid& grid() const noexcept { return grid_; }
  const OperatorConfig& config() const noexcept { return config_; }
  const FourierX1& fourier() const noexcept { return *fft_; }
  int modes() const noexcept { return fft_->modes(); }

  /// Real factor s_k with d/dx1 acting on mode k as multiplication by i*s_k.
  /// Zero for k = 0 and the Nyquist mode.
  double d1_symbol(int k) const { return d1_symbol_.at(k); }
  /// Eigenvalue of d2/dx1^2 on mode k (non-positive).
  double d11_symbol(int k) const { return d11_symbol_.at(k); }

  ScalarField d1(const ScalarField& f) const;
  ScalarField d11(const ScalarField& f) const;
  /// Centered in the interior, one-sided second order on the walls.
  ScalarField d2(const ScalarField& f) const;

  std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) const;
  ScalarField divergence(const ScalarField& u1, const ScalarField& u2) const;
  /// x1 symbol plus the 3-point x2 second difference. Wall rows use a
  /// one-sided 4-point stencil and are informational only.
  ScalarField laplacian(const ScalarField& f) const;
  /// skew: (1/2)[(u.grad) f + div(u f)];  advective: (u.grad) f.
  ScalarField advect(const ScalarField& u1, const ScalarField& u2, const ScalarField& f) const;

  /// Quadrature of grad f . grad g, the bilinear form with
  /// dirichlet_form(f, g) == -<laplacian(f), g> for g vanishing on the walls.
  double dirichlet_form(const ScalarField& f, const ScalarField& g) const;

 private:
  ScalarField apply_symbol(const ScalarField& f, const std::vector<double>& symbol,
                           bool imaginary) const;

  Grid grid_;
  OperatorConfig config_;
  std::unique_ptr<FourierX1> fft_;
  std::vector<double> d1_symbol_;
  std::vector<double> d11_symbol_;
};

/// Sum over u1, u2, T, q of dirichlet_form(f, f).
double h1_seminorm_sq(const DifferentialOperators& ops, const State& s);

/// Sum of dirichlet_form over the velocity components only.
double velocity_h1_seminorm_sq(const DifferentialOperators& ops, const State& s);

}  // namespace atmocirc
