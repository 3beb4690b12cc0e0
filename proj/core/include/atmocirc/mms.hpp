#pragma once

/// @file mms.hpp
/// @brief Manufactured-solution convergence harness for the stepper.
///
/// Exact fields (amplitude A, tau = cos t):
///   psi = A sin(x1) sin^2(pi x2) tau,  u = (d psi/d x2, -d psi/d x1)
///   T   = A sin(x1) sin(pi x2) tau
///   q   = A cos(x1) sin(pi x2) tau
///   p   = 0
/// All vanish on the walls and u is divergence free. Substituting them into
/// the momentum, heat and humidity equations gives the residual sources
/// Q, G and an auxiliary momentum source that make them exact solutions.

#include <optional>
#include <utility>
#include <vector>

#include "atmocirc/operators.hpp"
#include "atmocirc/params.hpp"
#include "atmocirc/stepper.hpp"

namespace atmocirc {

struct PointValues {
  double u1 = 0.0, u2 = 0.0, T = 0.0, q = 0.0;
};

class ManufacturedSolution {
 public:
  ManufacturedSolution(const DimensionlessParams& d, double amplitude = 1.0,
                       CoriolisSign sign = CoriolisSign::paper);

  PointValues exact(double x1, double x2, double t) const;
  /// Residual sources (momentum1, momentum2, Q, G) at a point.
  PointValues sources(double x1, double x2, double t) const;

  State exact_state(const Grid& grid, double t) const;
  Forcing forcing(const Grid& grid, double t) const;

  double amplitude() const noexcept { return amplitude_; }
  const DimensionlessParams& params() const noexcept { return params_; }
  CoriolisSign sign() const noexcept { return sign_; }

 private:
  DimensionlessParams params_;
  double amplitude_;
  CoriolisSign sign_;
};

struct MmsErrors {
  double u1 = 0.0, u2 = 0.0, T = 0.0, q = 0.0;
};

struct MmsRun {
  int n1 = 0;
  int n2 = 0;
  double dt = 0.0;
  int steps = 0;
  MmsErrors error;             // L2 distance to the exact solution at t_end
  double max_divergence_rel = 0.0;
  bool walls_exact = true;
  std::optional<State> final_state;
};

struct MmsOptions {
  std::vector<std::pair<int, int>> spatial_grids{{16, 17}, {32, 33}, {64, 65}};
  /// dt = dt_factor * dx2^2 on each spatial level.
  double dt_factor = 1.0;
  double t_end = 0.1;
  std::pair<int, int> temporal_grid{32, 33};
  std::vector<double> temporal_dts{4e-3, 2e-3, 1e-3, 5e-4};
  DimensionlessParams params{0.7, 0.5, 2.0, 1.0, 0.3, 0.2, 0.1};
  double amplitude = 1.0;
  DiffusionScheme temporal_scheme = DiffusionScheme::crank_nicolson;
  CoriolisSign sign = CoriolisSign::paper;
  OperatorConfig operators{};
};

struct ConvergenceReport {
  std::vector<MmsRun> spatial;
  MmsErrors spatial_order;
  std::vector<MmsRun> temporal;
  /// L2 differences between consecutive dt levels (self-convergence).
  std::vector<MmsErrors> temporal_differences;
  MmsErrors temporal_order;

  bool passed(double min_order) const;
};

/// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

/// Runs one manufactured-solution integration to t_end.
MmsRun run_mms(const ManufacturedSolution& mms, const Grid& grid, double dt, double t_end,
               DiffusionScheme scheme, const OperatorConfig& ops_config = {});

/// Runs the spatial ladder and the temporal dt ladder.
ConvergenceReport verify_mms(const MmsOptions& options);

}  // namespace atmocirc
