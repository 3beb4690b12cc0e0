#pragma once

/// @file diagnostics.hpp
/// @brief Energy budget, the (A1) energy inequality, the (A2) Hölder-in-time
/// probe and weak-form residuals, evaluated with the same discrete operators
/// the stepper uses.
///
/// The weak form of the right-hand side against a test state psi = (v, S, z):
///
///   <F phi, psi> = -Pr grad u : grad v - Pr (sigma u).v + Pr (R T - Rt q) v2 - ((u.grad)u).v
///                  - grad T . grad S + u2 S - (u.grad T) S + Q S
///                  - Le grad q . grad z + u2 z - (u.grad q) z + G z
///
/// integrated with the channel quadrature. grad f . grad g is
/// DifferentialOperators::dirichlet_form, so with psi = phi the diffusion
/// terms equal <laplacian(f), f> exactly.

#include <memory>
#include <string>
#include <vector>

#include "atmocirc/fields.hpp"
#include "atmocirc/operators.hpp"
#include "atmocirc/params.hpp"
#include "atmocirc/pressure.hpp"
#include "atmocirc/stepper.hpp"

namespace atmocirc {

/// |advection_total| + |pressure_work| <= tol * (1 + E + D).
inline constexpr double kCancellationTolerance = 1e-8;
/// max|div u| <= tol * ||u||_{H1}.
inline constexpr double kDivergenceTolerance = 1e-8;
/// Full <F phi, phi> against the sum of the reduced terms, relative.
inline constexpr double kIdentityTolerance = 1e-6;
/// (A2) exponent the fitted slope must reach: 1/2 minus 0.05 slack.
inline constexpr double kA2MinExponent = 0.45;

struct EnergyBudget {
  double diffusion_u = 0.0;  // -Pr |grad u|^2
  double friction = 0.0;     // -Pr sigma u . u
  double coupling_T = 0.0;   // (Pr R + 1) u2 T
  double coupling_q = 0.0;   // -(Pr Rt - 1) q u2
  double diffusion_T = 0.0;  // -|grad T|^2
  double source_T = 0.0;     // Q T
  double diffusion_q = 0.0;  // -Le |grad q|^2
  double source_q = 0.0;     // G q
  double advection_total = 0.0;
  double pressure_work = 0.0;  // -Pr grad p . u
  /// <F_h(phi), phi> from the assembled discrete tendency.
  double full = 0.0;
  /// Quadrature of Q^2 + G^2.
  double forcing_sq = 0.0;

  double reduced_sum() const noexcept {
    return diffusion_u + friction + coupling_T + coupling_q + diffusion_T + source_T +
           diffusion_q + source_q;
  }
};

/// Throws std::invalid_argument if the Dirichlet rows of `s` are not zero and
/// std::logic_error if `full` disagrees with the sum of its parts beyond
/// kIdentityTolerance. The momentum source of `f`, if any, is ignored.
EnergyBudget energy_identity(const DifferentialOperators& ops, const State& s, const Forcing& f,
                             const DimensionlessParams& d,
                             CoriolisSign sign = CoriolisSign::paper);

/// Constants of the energy inequality
///   <F phi, phi> <= -C1 ||phi||_{H1}^2 + C2 ||phi||_H^2 + C4
/// with C1 = min(Pr, 1, Le)/2, C2 = Pr|R| + Pr|Rt| + 2 + Pr||sigma||,
/// C4 = int(Q^2 + G^2). Each term of the budget is bounded by Young's
/// inequality, so the bound holds for the discrete quantities as well.
struct A1Certificate {
  double C1 = 0.0;
  double C2 = 0.0;
  double C4 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool satisfied = false;
};

/// `E` is (1/2)||phi||_H^2 and `D` the H1 seminorm squared. A margin within
/// roundoff of zero (kCancellationTolerance * (1 + E + D)) counts as satisfied.
A1Certificate check_A1(const EnergyBudget& budget, double E, double D,
                       const DimensionlessParams& d, CoriolisSign sign = CoriolisSign::paper);

/// <F phi, psi>; pressure is omitted (test velocities are discretely
/// divergence free, so it would contribute nothing).
double weak_form(const DifferentialOperators& ops, const State& s, const State& psi,
                 const Forcing& f, const DimensionlessParams& d,
                 CoriolisSign sign = CoriolisSign::paper);

struct TestFunction {
  std::string name;
  State psi;
};

/// sin(k x1) sin(m pi x2) and cos(k x1) sin(m pi x2) for k <= 2, m <= 2, in
/// each of T and q separately, and as streamfunctions for the velocity
/// (psi * sin(m pi x2) so u vanishes on the walls), projected to be
/// discretely divergence free. sin with k = 0 is omitted.
std::vector<TestFunction> test_function_bank(const DifferentialOperators& ops,
                                             const Projector& projector);

using Trajectory = std::vector<State>;

/// r_n = (phi_n, v)_H - (phi_0, v)_H - int_0^{t_n} <F phi, v> dt, trapezoid in time.
std::vector<double> weak_residual(const DifferentialOperators& ops, const Trajectory& traj,
                                  const State& v, const Forcing& f, const DimensionlessParams& d,
                                  CoriolisSign sign = CoriolisSign::paper);

struct A2Options {
  /// Widest window, in snapshot intervals. Keep it short against the
  /// trajectory time scale so the fit sees the small-h regime.
  std::size_t max_window = 16;
  int levels = 5;               // widths max_window / 2^m, m = 0..levels-1
};

/// For each width h the probe records the modulus
///   w(h) = max over window starts t of |int_t^{t+h} <F phi, v> dt|
/// and fits log w against log h.
struct A2Result {
  std::vector<double> widths;
  std::vector<double> moduli;
  double slope = 0.0;
  bool degenerate = false;
  bool passed = false;
};

/// Throws std::out_of_range if the widest window does not fit in the trajectory.
A2Result check_A2(const DifferentialOperators& ops, const Trajectory& traj, const State& v,
                  const Forcing& f, const DimensionlessParams& d, const A2Options& options = {},
                  CoriolisSign sign = CoriolisSign::paper);

/// max|div u| / ||u||_{H1}, or 0 when the divergence is exactly zero.
double divergence_relative(const DifferentialOperators& ops, const State& s);

struct DiagnosticsRecord {
  double time = 0.0;
  double E = 0.0;
  double D = 0.0;
  double divergence_inf = 0.0;
  double divergence_rel = 0.0;
  EnergyBudget budget;
  A1Certificate a1;
  std::vector<double> weak_residuals;

  bool cancellation_holds() const noexcept;
};

/// Streams DiagnosticsRecords along a trajectory, accumulating the weak
/// residual integrals with the trapezoid rule between recorded states.
class DiagnosticsMonitor {
 public:
  DiagnosticsMonitor(std::shared_ptr<const DifferentialOperators> ops,
                     const DimensionlessParams& d, Forcing forcing,
                     CoriolisSign sign = CoriolisSign::paper);

  DiagnosticsRecord record(const State& s);

  const std::vector<TestFunction>& bank() const noexcept { return bank_; }
  std::vector<std::string> csv_header() const;
  static std::string csv_row(const DiagnosticsRecord& r);

 private:
  std::shared_ptr<const DifferentialOperators> ops_;
  DimensionlessParams params_;
  Forcing forcing_;
  CoriolisSign sign_;
  std::vector<TestFunction> bank_;
  bool started_ = false;
  double last_time_ = 0.0;
  std::vector<double> initial_pairing_;
  std::vector<double> last_integrand_;
  std::vector<double> integral_;
};

}  // namespace atmocirc
