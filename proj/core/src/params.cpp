#include "atmocirc/params.hpp"

#include <cmath>

namespace atmocirc {

ParameterError::ParameterError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

namespace {

void require_finite(const char* name, double v) {
  if (!std::isfinite(v)) throw ParameterError(name, "must be finite");
}

void require_positive(const char* name, double v) {
  require_finite(name, v);
  if (!(v > 0.0)) throw ParameterError(name, "must be positive");
}

double temperature_difference(const PhysicalParams& p) {
  const double dT = p.T_bottom - p.T_top;
  if (dT == 0.0) throw ParameterError("T_bottom", "T_bottom and T_top must differ");
  return dT;
}

double humidity_difference(const PhysicalParams& p) {
  const double dq = p.q_bottom - p.q_top;
  if (dq == 0.0) throw ParameterError("q_bottom", "q_bottom and q_top must differ");
  return dq;
}

}  // namespace

void validate(const PhysicalParams& p) {
  require_positive("nu", p.nu);
  require_positive("kappa_T", p.kappa_T);
  require_positive("kappa_q", p.kappa_q);
  require_positive("h", p.h);
  require_finite("alpha_T", p.alpha_T);
  require_finite("alpha_q", p.alpha_q);
  require_finite("g", p.g);
  require_finite("Omega", p.Omega);
  require_finite("sigma0", p.sigma0);
  require_finite("sigma1", p.sigma1);
  require_finite("T_bottom", p.T_bottom);
  require_finite("T_top", p.T_top);
  require_finite("q_bottom", p.q_bottom);
  require_finite("q_top", p.q_top);
  temperature_difference(p);
}

void validate(const DimensionlessParams& d) {
  require_positive("Pr", d.Pr);
  require_positive("Le", d.Le);
  require_finite("R", d.R);
  require_finite("R_tilde", d.R_tilde);
  require_finite("sigma0p", d.sigma0p);
  require_finite("sigma1p", d.sigma1p);
  require_finite("omega", d.omega);
}

DimensionlessParams nondimensionalize(const PhysicalParams& p) {
  validate(p);
  const double h2 = p.h * p.h;
  const double h3 = h2 * p.h;
  DimensionlessParams d;
  d.Pr = p.nu / p.kappa_T;
  d.Le = p.kappa_q / p.kappa_T;
  d.R = p.g * p.alpha_T * (p.T_bottom - p.T_top) * h3 / (p.kappa_T * p.nu);
  d.R_tilde = p.g * p.alpha_q * (p.q_bottom - p.q_top) * h3 / (p.kappa_T * p.nu);
  d.sigma0p = p.sigma0 * h2 / p.nu;
  d.sigma1p = p.sigma1 * h2 / p.nu;
  d.omega = 2.0 * p.Omega * h2 / p.nu;
  validate(d);
  return d;
}

double scale_time(const PhysicalParams& p, double t_dimensional) {
  require_positive("h", p.h);
  require_positive("kappa_T", p.kappa_T);
  require_finite("t", t_dimensional);
  return t_dimensional * p.kappa_T / (p.h * p.h);
}

double time_scale(const PhysicalParams& p) {
  require_positive("h", p.h);
  require_positive("kappa_T", p.kappa_T);
  return p.h * p.h / p.kappa_T;
}

SourceFactors forcing_factors(const PhysicalParams& p, HumiditySourceScaling scaling) {
  require_positive("h", p.h);
  require_positive("kappa_T", p.kappa_T);
  const double h2 = p.h * p.h;
  SourceFactors f;
  f.heat = h2 / (temperature_difference(p) * p.kappa_T);
  f.humidity = scaling == HumiditySourceScaling::paper
                   ? f.heat
                   : h2 / (humidity_difference(p) * p.kappa_T);
  return f;
}

ScaledSources scale_forcing(const PhysicalParams& p, std::span<const double> Q_dim,
                            std::span<const double> G_dim, HumiditySourceScaling scaling) {
  const SourceFactors f = forcing_factors(p, scaling);
  ScaledSources out;
  out.Q.reserve(Q_dim.size());
  out.G.reserve(G_dim.size());
  for (double v : Q_dim) out.Q.push_back(v * f.heat);
  for (double v : G_dim) out.G.push_back(v * f.humidity);
  return out;
}

double velocity_to_dimensional(const PhysicalParams& p, double u_nd) {
  return u_nd * p.kappa_T / p.h;
}

double velocity_to_nondimensional(const PhysicalParams& p, double u) {
  return u * p.h / p.kappa_T;
}

double temperature_to_dimensional(const PhysicalParams& p, double T_nd, double x2_nd) {
  const double dT = temperature_difference(p);
  return p.T_bottom - dT * x2_nd + dT * T_nd;
}

double temperature_to_nondimensional(const PhysicalParams& p, double T, double x2_nd) {
  const double dT = temperature_difference(p);
  return (T - p.T_bottom + dT * x2_nd) / dT;
}

double humidity_to_dimensional(const PhysicalParams& p, double q_nd, double x2_nd) {
  const double dq = humidity_difference(p);
  return p.q_bottom - dq * x2_nd + dq * q_nd;
}

double humidity_to_nondimensional(const PhysicalParams& p, double q, double x2_nd) {
  const double dq = humidity_difference(p);
  return (q - p.q_bottom + dq * x2_nd) / dq;
}

double kinematic_pressure_scale(const PhysicalParams& p) {
  return p.nu * p.kappa_T / (p.h * p.h);
}

Matrix2 friction_matrix(const DimensionlessParams& d, CoriolisSign sign) {
  const double lower = sign == CoriolisSign::paper ? d.omega : -d.omega;
  return Matrix2{{{d.sigma0p, d.omega}, {lower, d.sigma1p}}};
}

double operator_norm(const Matrix2& m) {
  // Largest eigenvalue of m^T m.
  const double a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
  const double b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
  const double c = m[0][1] * m[0][1] + m[1][1] * m[1][1];
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return std::sqrt(mean + radius);
}

}  // namespace atmocirc
