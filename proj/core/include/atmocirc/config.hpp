#pragma once

/// @file config.hpp
/// @brief Run configuration: a plain `key = value` file with `[section]` headers.
///
///   [dimensionless]          exactly one of [dimensionless] / [physical]
///   Pr = 1
///   [grid]
///   n1 = 32
///   n2 = 33
///   [time]
///   dt = 1e-3
///   t_end = 1
///
/// Sections: dimensionless, physical, grid, time, initial, forcing, numerics,
/// output, diagnostics. `#` starts a comment. Unknown sections, unknown keys
/// and repeated keys are errors. Times are always nondimensional; with a
/// [physical] block the forcing amplitudes are dimensional source rates and
/// are scaled at load.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "atmocirc/fields.hpp"
#include "atmocirc/operators.hpp"
#include "atmocirc/params.hpp"
#include "atmocirc/stepper.hpp"

namespace atmocirc {

/// `line()` is 1-based, 0 when the error is not tied to a line. `field()`
/// names the offending key (section.key) when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {});
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Single mode:
///   streamfunction u_amplitude sin(k x1) sin^2(m pi x2)  (velocity projected)
///   T = T_amplitude cos(k x1) sin(m pi x2)
///   q = q_amplitude sin(k x1) sin(m pi x2)
/// File: a snapshot CSV on the run grid, nondimensional.
struct InitialSpec {
  enum class Kind { zero, single_mode, file };
  Kind kind = Kind::zero;
  double u_amplitude = 0.0;
  double T_amplitude = 0.0;
  double q_amplitude = 0.0;
  int k = 1;
  int m = 1;
  std::string path;

  bool operator==(const InitialSpec&) const = default;
};

/// constant: Q = Q0, G = G0.
/// single_mode: Q = Q_amplitude cos(k x1) sin(m pi x2), G = G_amplitude sin(k x1) sin(m pi x2).
/// file: CSV with header `x1,x2,Q,G` on the run grid.
struct ForcingSpec {
  enum class Kind { zero, constant, single_mode, file };
  Kind kind = Kind::zero;
  double Q0 = 0.0;
  double G0 = 0.0;
  double Q_amplitude = 0.0;
  double G_amplitude = 0.0;
  int k = 1;
  int m = 1;
  std::string path;

  bool operator==(const ForcingSpec&) const = default;
};

struct RunConfig {
  std::optional<PhysicalParams> physical;
  std::optional<DimensionlessParams> dimensionless;
  HumiditySourceScaling humidity_source_scaling = HumiditySourceScaling::paper;
  int n1 = 32;
  int n2 = 33;
  StepConfig step{.dt = 1e-3, .t_end = 1.0};
  InitialSpec initial;
  ForcingSpec forcing;
  OperatorConfig numerics;
  CoriolisSign coriolis_sign = CoriolisSign::paper;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  /// The dimensionless block, or the nondimensionalized physical block.
  DimensionlessParams params() const;
  Grid grid() const { return Grid(n1, n2); }

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Checks the invariants parse_config enforces (block exclusivity, grid and
/// step validity, referenced files present and on the grid). Throws ConfigError.
void validate(const RunConfig& c);

/// Canonical text; parse_config(render(c)) == c. Doubles use 17 significant digits.
std::string render(const RunConfig& c);

State initial_state(const RunConfig& c, const DifferentialOperators& ops);
/// Nondimensional Q and G on the run grid.
Forcing make_forcing(const RunConfig& c, const Grid& grid);

std::string_view to_string(DiffusionScheme s);
std::string_view to_string(ExplicitScheme s);
std::string_view to_string(AdvectionForm f);
std::string_view to_string(X1Method m);
std::string_view to_string(CoriolisSign s);
std::string_view to_string(HumiditySourceScaling s);
std::string_view to_string(InitialSpec::Kind k);
std::string_view to_string(ForcingSpec::Kind k);

}  // namespace atmocirc
