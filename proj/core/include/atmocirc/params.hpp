#pragma once

/// @file params.hpp
/// @brief Physical constants, dimensionless groups and the scalings between them.
///
/// Lengths are scaled by the troposphere height h, time by h^2/kappa_T,
/// velocity by kappa_T/h. Temperature and humidity are written as a linear
/// conduction profile between the wall values plus a scaled perturbation:
///
///   T = T_bottom - (T_bottom - T_top) x2/h + (T_bottom - T_top) T'
///   q = q_bottom - (q_bottom - q_top) x2/h + (q_bottom - q_top) q'
///
/// The reference density, specific heat and gas constant drop out in the
/// Boussinesq reduction and are not inputs.

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace atmocirc {

/// Raised when a parameter block violates its invariants. `field()` names
/// the offending entry.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Dimensional constants (SI units).
struct PhysicalParams {
  double nu = 0.0;       // kinematic viscosity [m^2/s]
  double kappa_T = 0.0;  // thermal diffusivity [m^2/s]
  double kappa_q = 0.0;  // humidity diffusivity [m^2/s]
  double alpha_T = 0.0;  // thermal expansion [1/K]
  double alpha_q = 0.0;  // humidity contraction
  double g = 0.0;        // gravity [m/s^2]
  double h = 0.0;        // troposphere height [m]
  double Omega = 0.0;    // rotation rate [1/s]
  double sigma0 = 0.0;   // turbulent friction, horizontal [1/s]
  double sigma1 = 0.0;   // turbulent friction, vertical [1/s]
  double T_bottom = 0.0;
  double T_top = 0.0;
  double q_bottom = 0.0;
  double q_top = 0.0;

  bool operator==(const PhysicalParams&) const = default;
};

/// Groups appearing in the nondimensional system.
struct DimensionlessParams {
  double Pr = 1.0;
  double Le = 1.0;
  double R = 0.0;
  double R_tilde = 0.0;
  double sigma0p = 0.0;
  double sigma1p = 0.0;
  double omega = 0.0;

  bool operator==(const DimensionlessParams&) const = default;
};

/// How the humidity source G is scaled. `paper` (the default) divides by the
/// temperature difference, like Q; `symmetric` divides by the humidity
/// difference.
enum class HumiditySourceScaling { paper, symmetric };

/// Off-diagonal sign of the friction/rotation matrix. `paper` (the default) uses the
/// symmetric [[s0, w], [w, s1]]; `antisymmetric` uses [[s0, w], [-w, s1]].
enum class CoriolisSign { paper, antisymmetric };

using Matrix2 = std::array<std::array<double, 2>, 2>;

void validate(const PhysicalParams& p);
void validate(const DimensionlessParams& d);

DimensionlessParams nondimensionalize(const PhysicalParams& p);

/// t * kappa_T / h^2.
double scale_time(const PhysicalParams& p, double t_dimensional);
/// h^2 / kappa_T, the dimensional duration of one nondimensional time unit.
double time_scale(const PhysicalParams& p);

struct SourceFactors {
  double heat = 0.0;
  double humidity = 0.0;
};

SourceFactors forcing_factors(const PhysicalParams& p,
                              HumiditySourceScaling scaling = HumiditySourceScaling::paper);

struct ScaledSources {
  std::vector<double> Q;
  std::vector<double> G;
};

/// Multiplies the dimensional sources by h^2/((T_bottom - T_top) kappa_T).
/// With `symmetric` scaling, G uses (q_bottom - q_top) instead.
ScaledSources scale_forcing(const PhysicalParams& p, std::span<const double> Q_dim,
                            std::span<const double> G_dim,
                            HumiditySourceScaling scaling = HumiditySourceScaling::paper);

// Field maps. Coordinates are in metres, nondimensional coordinates in units of h.
double velocity_to_dimensional(const PhysicalParams& p, double u_nd);
double velocity_to_nondimensional(const PhysicalParams& p, double u);
double temperature_to_dimensional(const PhysicalParams& p, double T_nd, double x2_nd);
double temperature_to_nondimensional(const PhysicalParams& p, double T, double x2_nd);
double humidity_to_dimensional(const PhysicalParams& p, double q_nd, double x2_nd);
double humidity_to_nondimensional(const PhysicalParams& p, double q, double x2_nd);
/// Dynamic kinematic pressure p/rho0 per unit nondimensional pressure (nu kappa_T / h^2).
double kinematic_pressure_scale(const PhysicalParams& p);

/// The friction/rotation matrix multiplying u in the momentum equation.
Matrix2 friction_matrix(const DimensionlessParams& d, CoriolisSign sign = CoriolisSign::paper);
/// Spectral (operator 2-) norm of `m`.
double operator_norm(const Matrix2& m);

}  // namespace atmocirc
