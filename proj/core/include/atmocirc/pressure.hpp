#pragma once

/// @file pressure.hpp
/// @brief Pressure Poisson solve and velocity projection.

#include <memory>
#include <stdexcept>
#include <vector>

#include "atmocirc/fields.hpp"
#include "atmocirc/operators.hpp"

namespace atmocirc {

class SingularModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Laplace problem with homogeneous Neumann walls and periodic x1.
struct PoissonProblem {
  ScalarField rhs;
  bool pin_mean = true;
};

/// Fourier in x1, one tridiagonal system in x2 per mode. The k = 0 system is
/// singular; it is solved with one value pinned and the result shifted to
/// zero mean. The rhs mean is removed first, which makes the problem solvable.
class PoissonSolver {
 public:
  explicit PoissonSolver(std::shared_ptr<const DifferentialOperators> ops);

  ScalarField solve(const PoissonProblem& problem) const;
  /// The discrete Neumann Laplacian that `solve` inverts.
  ScalarField apply(const ScalarField& p) const;

 private:
  std::shared_ptr<const DifferentialOperators> ops_;
};

ScalarField solve_poisson(const DifferentialOperators& ops, const PoissonProblem& problem);

struct Projection {
  ScalarField u1;
  ScalarField u2;
  ScalarField phi;  // pressure increment, mean zero
};

/// Discrete Helmholtz projection onto fields with div_h u = 0 exactly, where
/// div_h is DifferentialOperators::divergence. The Poisson operator is
/// div_h(grad_h .) restricted to velocities that vanish on the walls, so one
/// dense symmetric-structured system per Fourier mode is factored up front
/// (pseudo-inverse for the k = 0 and Nyquist modes, whose kernels hold the
/// constant and the x2 checkerboard).
///
/// The result is the orthogonal projection under the channel quadrature:
/// idempotent, non-expansive, and <grad_h phi, u_projected> = 0.
class Projector {
 public:
  explicit Projector(std::shared_ptr<const DifferentialOperators> ops);

  /// Solves div_h grad_h phi = div_h(u*) / (dt Pr) and returns
  /// u* - dt Pr grad_h phi with wall rows zeroed.
  Projection project(const ScalarField& u1, const ScalarField& u2, double dt, double Pr) const;

  /// Dimension of the kernel found for mode k.
  int kernel_dimension(int k) const { return kernel_dim_.at(k); }

 private:
  std::shared_ptr<const DifferentialOperators> ops_;
  std::vector<std::vector<double>> pinv_;  // n2 x n2 row-major, one per mode
  std::vector<int> kernel_dim_;
};

}  // namespace atmocirc
