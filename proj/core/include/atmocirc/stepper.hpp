#pragma once

/// @file stepper.hpp
/// @brief IMEX time integration of the moist Boussinesq channel system.
///
/// Per step: explicit advection, friction/rotation, buoyancy and the u2
/// source terms (AB2 after a forward-Euler start); implicit diffusion per
/// field (Crank-Nicolson or backward Euler, Fourier in x1 and tridiagonal in
/// x2); then an incremental pressure projection. Forcing passed to `step` is
/// taken to be evaluated at t + theta*dt.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "atmocirc/fields.hpp"
#include "atmocirc/operators.hpp"
#include "atmocirc/params.hpp"
#include "atmocirc/pressure.hpp"
#include "atmocirc/tridiagonal.hpp"

namespace atmocirc {

enum class DiffusionScheme { backward_euler, crank_nicolson };
enum class ExplicitScheme { euler, ab2 };

struct StepConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  DiffusionScheme diffusion_scheme = DiffusionScheme::crank_nicolson;
  ExplicitScheme explicit_scheme = ExplicitScheme::ab2;
  int snapshot_interval = 1;

  bool operator==(const StepConfig&) const = default;
};

void validate(const StepConfig& c);

/// Nondimensional heat and humidity sources. The momentum source is only
/// set by the manufactured-solution harness.
struct Forcing {
  explicit Forcing(const Grid& grid);

  ScalarField Q;
  ScalarField G;
  std::optional<ScalarField> momentum1;
  std::optional<ScalarField> momentum2;
};

struct Tendency {
  explicit Tendency(const Grid& grid);

  ScalarField u1;
  ScalarField u2;
  ScalarField T;
  ScalarField q;
};

/// Advection, friction/rotation, buoyancy and u2 sources; no diffusion,
/// pressure or external forcing. Wall rows are zero.
Tendency explicit_tendency(const DifferentialOperators& ops, const State& s,
                           const DimensionlessParams& d, CoriolisSign sign = CoriolisSign::paper);

/// explicit_tendency plus Q, G (and the momentum source when present).
Tendency rhs_explicit(const DifferentialOperators& ops, const State& s, const Forcing& f,
                      const DimensionlessParams& d, CoriolisSign sign = CoriolisSign::paper);

class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(std::string field, double time);
  const std::string& field() const noexcept { return field_; }
  double time() const noexcept { return time_; }

 private:
  std::string field_;
  double time_;
};

struct StepReport {
  double cfl = 0.0;
  bool cfl_exceeded = false;
  double divergence_inf = 0.0;
};

inline constexpr double kCflLimit = 0.5;

/// dt * max over nodes of (|u1|/dx1 + |u2|/dx2).
double cfl_number(const State& s, double dt);

class Stepper {
 public:
  Stepper(std::shared_ptr<const DifferentialOperators> ops, const DimensionlessParams& d,
          const StepConfig& c, CoriolisSign sign = CoriolisSign::paper);

  /// Advances `s` by one step. On NumericalBreakdown `s` is left unchanged.
  StepReport step(State& s, const Forcing& f);

  /// Forgets the AB2 history; the next step uses forward Euler.
  void reset_history() { previous_.reset(); }

  double theta() const noexcept;
  const StepConfig& config() const noexcept { return config_; }
  const DimensionlessParams& params() const noexcept { return params_; }
  const DifferentialOperators& operators() const noexcept { return *ops_; }
  const Projector& projector() const noexcept { return projector_; }

 private:
  ScalarField solve_diffusion(const ScalarField& rhs, int which) const;

  std::shared_ptr<const DifferentialOperators> ops_;
  DimensionlessParams params_;
  StepConfig config_;
  CoriolisSign sign_;
  Projector projector_;
  // One tridiagonal system per Fourier mode for each diffusivity (u, T, q).
  std::vector<Tridiagonal> systems_[3];
  std::optional<Tendency> previous_;
};

/// One step from `s` with no AB2 history.
State step(std::shared_ptr<const DifferentialOperators> ops, const State& s, const Forcing& f,
           const DimensionlessParams& d, const StepConfig& c,
           CoriolisSign sign = CoriolisSign::paper);

}  // namespace atmocirc
