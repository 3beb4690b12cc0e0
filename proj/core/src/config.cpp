#include "atmocirc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "atmocirc/diagnostics.hpp"
#include "atmocirc/pressure.hpp"
#include "atmocirc/snapshot_io.hpp"

namespace atmocirc {

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      field_(std::move(field)) {}

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::string section, const std::map<std::string, Entry>& entries)
      : section_(std::move(section)), entries_(entries) {}

  void real(const char* key, double& out) const {
    with(key, [&](const Entry& e, const std::string& field) {
      const char* first = e.value.data();
      const char* last = first + e.value.size();
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last)
        throw ConfigError("expected a number for " + field + ", got '" + e.value + "'", e.line,
                          field);
      out = v;
    });
  }

  template <typename Int>
  void integer(const char* key, Int& out) const {
    with(key, [&](const Entry& e, const std::string& field) {
      const char* first = e.value.data();
      const char* last = first + e.value.size();
      Int v{};
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last)
        throw ConfigError("expected an integer for " + field + ", got '" + e.value + "'",
                          e.line, field);
      out = v;
    });
  }

  void text(const char* key, std::string& out) const {
    with(key, [&](const Entry& e, const std::string&) { out = e.value; });
  }

  template <typename Enum, std::size_t N>
  void choice(const char* key, Enum& out, const Enum (&options)[N]) const {
    with(key, [&](const Entry& e, const std::string& field) {
      std::string allowed;
      for (Enum o : options) {
        if (e.value == to_string(o)) {
          out = o;
          return;
        }
        allowed += (allowed.empty() ? "" : "|") + std::string(to_string(o));
      }
      throw ConfigError("invalid value '" + e.value + "' for " + field + " (expected " +
                            allowed + ")",
                        e.line, field);
    });
  }

 private:
  template <typename F>
  void with(const char* key, F&& f) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    f(it->second, section_ + "." + key);
  }

  std::string section_;
  const std::map<std::string, Entry>& entries_;
};

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"dimensionless", {"Pr", "Le", "R", "R_tilde", "sigma0p", "sigma1p", "omega"}},
      {"physical",
       {"nu", "kappa_T", "kappa_q", "alpha_T", "alpha_q", "g", "h", "Omega", "sigma0", "sigma1",
        "T_bottom", "T_top", "q_bottom", "q_top", "humidity_source_scaling"}},
      {"grid", {"n1", "n2"}},
      {"time", {"dt", "t_end", "diffusion_scheme", "explicit_scheme", "snapshot_interval"}},
      {"initial", {"kind", "u_amplitude", "T_amplitude", "q_amplitude", "k", "m", "path"}},
      {"forcing", {"kind", "Q0", "G0", "Q_amplitude", "G_amplitude", "k", "m", "path"}},
      {"numerics", {"advection_form", "x1_method", "coriolis_sign"}},
      {"output", {"dir"}},
      {"diagnostics", {"seed"}},
  };
  return s;
}

using Sections = std::map<std::string, std::map<std::string, Entry>>;

Sections tokenize(std::string_view text) {
  Sections sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().contains(current))
        throw ConfigError("unknown section [" + current + "]", line_no, current);
      if (sections.contains(current))
        throw ConfigError("duplicate section [" + current + "]", line_no, current);
      sections[current];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (current.empty())
      throw ConfigError("key '" + key + "' appears before any section", line_no, key);
    const std::string field = current + "." + key;
    const auto& known = schema().at(current);
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key " + field, line_no, field);
    if (value.empty()) throw ConfigError("missing value for " + field, line_no, field);
    auto& entries = sections[current];
    if (entries.contains(key)) throw ConfigError("duplicate key " + field, line_no, field);
    entries[key] = Entry{value, line_no};
    if (end == text.size()) break;
  }
  return sections;
}

constexpr DiffusionScheme kDiffusion[] = {DiffusionScheme::crank_nicolson,
                                          DiffusionScheme::backward_euler};
constexpr ExplicitScheme kExplicit[] = {ExplicitScheme::ab2, ExplicitScheme::euler};
constexpr AdvectionForm kAdvection[] = {AdvectionForm::skew, AdvectionForm::advective};
constexpr X1Method kX1[] = {X1Method::fourier_spectral, X1Method::centered2};
constexpr CoriolisSign kCoriolis[] = {CoriolisSign::paper, CoriolisSign::antisymmetric};
constexpr HumiditySourceScaling kScaling[] = {HumiditySourceScaling::paper,
                                              HumiditySourceScaling::symmetric};
constexpr InitialSpec::Kind kInitial[] = {InitialSpec::Kind::zero, InitialSpec::Kind::single_mode,
                                          InitialSpec::Kind::file};
constexpr ForcingSpec::Kind kForcing[] = {ForcingSpec::Kind::zero, ForcingSpec::Kind::constant,
                                          ForcingSpec::Kind::single_mode, ForcingSpec::Kind::file};

void require_finite(const char* field, double v) {
  if (!std::isfinite(v)) throw ConfigError(std::string(field) + " must be finite", 0, field);
}

void require_mode(const char* section, int k, int m) {
  if (k < 0) throw ConfigError(std::string(section) + ".k must be >= 0", 0,
                               std::string(section) + ".k");
  if (m < 1) throw ConfigError(std::string(section) + ".m must be >= 1", 0,
                               std::string(section) + ".m");
}

}  // namespace

std::string_view to_string(DiffusionScheme s) {
  return s == DiffusionScheme::crank_nicolson ? "crank_nicolson" : "backward_euler";
}
std::string_view to_string(ExplicitScheme s) { return s == ExplicitScheme::ab2 ? "ab2" : "euler"; }
std::string_view to_string(AdvectionForm f) {
  return f == AdvectionForm::skew ? "skew" : "advective";
}
std::string_view to_string(X1Method m) {
  return m == X1Method::fourier_spectral ? "fourier" : "centered2";
}
std::string_view to_string(CoriolisSign s) {
  return s == CoriolisSign::paper ? "paper" : "antisymmetric";
}
std::string_view to_string(HumiditySourceScaling s) {
  return s == HumiditySourceScaling::paper ? "paper" : "symmetric";
}
std::string_view to_string(InitialSpec::Kind k) {
  switch (k) {
    case InitialSpec::Kind::zero: return "zero";
    case InitialSpec::Kind::single_mode: return "single_mode";
    case InitialSpec::Kind::file: return "file";
  }
  return "";
}
std::string_view to_string(ForcingSpec::Kind k) {
  switch (k) {
    case ForcingSpec::Kind::zero: return "zero";
    case ForcingSpec::Kind::constant: return "constant";
    case ForcingSpec::Kind::single_mode: return "single_mode";
    case ForcingSpec::Kind::file: return "file";
  }
  return "";
}

DimensionlessParams RunConfig::params() const {
  if (dimensionless) return *dimensionless;
  if (physical) return nondimensionalize(*physical);
  throw ConfigError("exactly one parameter block ([physical] or [dimensionless]) is required");
}

void validate(const RunConfig& c) {
  if (c.physical.has_value() == c.dimensionless.has_value())
    throw ConfigError("exactly one parameter block ([physical] or [dimensionless]) is required");
  try {
    if (c.physical) {
      nondimensionalize(*c.physical);
      forcing_factors(*c.physical, c.humidity_source_scaling);
    } else {
      validate(*c.dimensionless);
    }
  } catch (const ParameterError& e) {
    const std::string block = c.physical ? "physical." : "dimensionless.";
    throw ConfigError(e.what(), 0, block + e.field());
  }

  try {
    Grid(c.n1, c.n2);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "grid.n1");
  }
  try {
    validate(c.step);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("time.") + e.what(), 0, "time." + e.field());
  }

  const Grid grid(c.n1, c.n2);
  const InitialSpec& ic = c.initial;
  require_finite("initial.u_amplitude", ic.u_amplitude);
  require_finite("initial.T_amplitude", ic.T_amplitude);
  require_finite("initial.q_amplitude", ic.q_amplitude);
  require_mode("initial", ic.k, ic.m);
  if (ic.kind == InitialSpec::Kind::file) {
    if (ic.path.empty()) throw ConfigError("initial.path is required for kind = file", 0,
                                           "initial.path");
    try {
      const State s = read_snapshot(ic.path, grid);
      if (!boundary_rows_zero(s))
        throw ConfigError("initial state in " + ic.path + " does not vanish on the walls", 0,
                          "initial.path");
    } catch (const SnapshotError& e) {
      throw ConfigError(e.what(), 0, "initial.path");
    }
  }

  const ForcingSpec& fc = c.forcing;
  require_finite("forcing.Q0", fc.Q0);
  require_finite("forcing.G0", fc.G0);
  require_finite("forcing.Q_amplitude", fc.Q_amplitude);
  require_finite("forcing.G_amplitude", fc.G_amplitude);
  require_mode("forcing", fc.k, fc.m);
  if (fc.kind == ForcingSpec::Kind::file) {
    if (fc.path.empty()) throw ConfigError("forcing.path is required for kind = file", 0,
                                           "forcing.path");
    try {
      read_forcing_file(fc.path, grid);
    } catch (const SnapshotError& e) {
      throw ConfigError(e.what(), 0, "forcing.path");
    }
  }
  if (c.output_dir.empty()) throw ConfigError("output.dir must not be empty", 0, "output.dir");
}

RunConfig parse_config(std::string_view text) {
  const Sections sections = tokenize(text);
  RunConfig c;
  auto section = [&](const char* name) -> const std::map<std::string, Entry>* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };

  if (auto* s = section("dimensionless")) {
    Reader r("dimensionless", *s);
    DimensionlessParams d;
    r.real("Pr", d.Pr);
    r.real("Le", d.Le);
    r.real("R", d.R);
    r.real("R_tilde", d.R_tilde);
    r.real("sigma0p", d.sigma0p);
    r.real("sigma1p", d.sigma1p);
    r.real("omega", d.omega);
    c.dimensionless = d;
  }
  if (auto* s = section("physical")) {
    Reader r("physical", *s);
    PhysicalParams p;
    r.real("nu", p.nu);
    r.real("kappa_T", p.kappa_T);
    r.real("kappa_q", p.kappa_q);
    r.real("alpha_T", p.alpha_T);
    r.real("alpha_q", p.alpha_q);
    r.real("g", p.g);
    r.real("h", p.h);
    r.real("Omega", p.Omega);
    r.real("sigma0", p.sigma0);
    r.real("sigma1", p.sigma1);
    r.real("T_bottom", p.T_bottom);
    r.real("T_top", p.T_top);
    r.real("q_bottom", p.q_bottom);
    r.real("q_top", p.q_top);
    r.choice("humidity_source_scaling", c.humidity_source_scaling, kScaling);
    c.physical = p;
  }
  if (auto* s = section("grid")) {
    Reader r("grid", *s);
    r.integer("n1", c.n1);
    r.integer("n2", c.n2);
  }
  if (auto* s = section("time")) {
    Reader r("time", *s);
    r.real("dt", c.step.dt);
    r.real("t_end", c.step.t_end);
    r.choice("diffusion_scheme", c.step.diffusion_scheme, kDiffusion);
    r.choice("explicit_scheme", c.step.explicit_scheme, kExplicit);
    r.integer("snapshot_interval", c.step.snapshot_interval);
  }
  if (auto* s = section("initial")) {
    Reader r("initial", *s);
    r.choice("kind", c.initial.kind, kInitial);
    r.real("u_amplitude", c.initial.u_amplitude);
    r.real("T_amplitude", c.initial.T_amplitude);
    r.real("q_amplitude", c.initial.q_amplitude);
    r.integer("k", c.initial.k);
    r.integer("m", c.initial.m);
    r.text("path", c.initial.path);
  }
  if (auto* s = section("forcing")) {
    Reader r("forcing", *s);
    r.choice("kind", c.forcing.kind, kForcing);
    r.real("Q0", c.forcing.Q0);
    r.real("G0", c.forcing.G0);
    r.real("Q_amplitude", c.forcing.Q_amplitude);
    r.real("G_amplitude", c.forcing.G_amplitude);
    r.integer("k", c.forcing.k);
    r.integer("m", c.forcing.m);
    r.text("path", c.forcing.path);
  }
  if (auto* s = section("numerics")) {
    Reader r("numerics", *s);
    r.choice("advection_form", c.numerics.advection_form, kAdvection);
    r.choice("x1_method", c.numerics.x1_method, kX1);
    r.choice("coriolis_sign", c.coriolis_sign, kCoriolis);
  }
  if (auto* s = section("output")) Reader("output", *s).text("dir", c.output_dir);
  if (auto* s = section("diagnostics")) Reader("diagnostics", *s).integer("seed", c.seed);

  try {
    validate(c);
  } catch (const ConfigError& e) {
    // Attach the line of the offending key when it was given explicitly.
    const std::string& field = e.field();
    const auto dot = field.find('.');
    if (dot != std::string::npos) {
      auto s = sections.find(field.substr(0, dot));
      if (s != sections.end()) {
        auto k = s->second.find(field.substr(dot + 1));
        if (k != s->second.end()) throw ConfigError(e.what(), k->second.line, field);
      }
    }
    throw;
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), 0, e.field());
  }
}

std::string render(const RunConfig& c) {
  std::string out;
  auto real = [&](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out += buf;
  };
  auto line = [&](const char* key, std::string_view v) {
    out += key;
    out += " = ";
    out += v;
    out += '\n';
  };
  auto integer = [&](const char* key, long long v) { line(key, std::to_string(v)); };

  if (c.dimensionless) {
    const DimensionlessParams& d = *c.dimensionless;
    out += "[dimensionless]\n";
    real("Pr", d.Pr);
    real("Le", d.Le);
    real("R", d.R);
    real("R_tilde", d.R_tilde);
    real("sigma0p", d.sigma0p);
    real("sigma1p", d.sigma1p);
    real("omega", d.omega);
  }
  if (c.physical) {
    const PhysicalParams& p = *c.physical;
    out += "[physical]\n";
    real("nu", p.nu);
    real("kappa_T", p.kappa_T);
    real("kappa_q", p.kappa_q);
    real("alpha_T", p.alpha_T);
    real("alpha_q", p.alpha_q);
    real("g", p.g);
    real("h", p.h);
    real("Omega", p.Omega);
    real("sigma0", p.sigma0);
    real("sigma1", p.sigma1);
    real("T_bottom", p.T_bottom);
    real("T_top", p.T_top);
    real("q_bottom", p.q_bottom);
    real("q_top", p.q_top);
    line("humidity_source_scaling", to_string(c.humidity_source_scaling));
  }
  out += "\n[grid]\n";
  integer("n1", c.n1);
  integer("n2", c.n2);
  out += "\n[time]\n";
  real("dt", c.step.dt);
  real("t_end", c.step.t_end);
  line("diffusion_scheme", to_string(c.step.diffusion_scheme));
  line("explicit_scheme", to_string(c.step.explicit_scheme));
  integer("snapshot_interval", c.step.snapshot_interval);
  out += "\n[initial]\n";
  line("kind", to_string(c.initial.kind));
  real("u_amplitude", c.initial.u_amplitude);
  real("T_amplitude", c.initial.T_amplitude);
  real("q_amplitude", c.initial.q_amplitude);
  integer("k", c.initial.k);
  integer("m", c.initial.m);
  if (!c.initial.path.empty()) line("path", c.initial.path);
  out += "\n[forcing]\n";
  line("kind", to_string(c.forcing.kind));
  real("Q0", c.forcing.Q0);
  real("G0", c.forcing.G0);
  real("Q_amplitude", c.forcing.Q_amplitude);
  real("G_amplitude", c.forcing.G_amplitude);
  integer("k", c.forcing.k);
  integer("m", c.forcing.m);
  if (!c.forcing.path.empty()) line("path", c.forcing.path);
  out += "\n[numerics]\n";
  line("advection_form", to_string(c.numerics.advection_form));
  line("x1_method", to_string(c.numerics.x1_method));
  line("coriolis_sign", to_string(c.coriolis_sign));
  out += "\n[output]\n";
  line("dir", c.output_dir);
  out += "\n[diagnostics]\n";
  line("seed", std::to_string(c.seed));
  return out;
}

State initial_state(const RunConfig& c, const DifferentialOperators& ops) {
  const Grid& g = ops.grid();
  std::shared_ptr<const DifferentialOperators> view(&ops, [](const DifferentialOperators*) {});
  const InitialSpec& ic = c.initial;
  State s(g);
  switch (ic.kind) {
    case InitialSpec::Kind::zero:
      return s;
    case InitialSpec::Kind::single_mode: {
      const double k = ic.k;
      const double mp = ic.m * kPi;
      ScalarField u1 = ScalarField::sample(g, [&](double x1, double x2) {
        return ic.u_amplitude * std::sin(k * x1) * mp * std::sin(2.0 * mp * x2);
      });
      ScalarField u2 = ScalarField::sample(g, [&](double x1, double x2) {
        const double s2 = std::sin(mp * x2);
        return -ic.u_amplitude * k * std::cos(k * x1) * s2 * s2;
      });
      Projection pr = Projector(view).project(u1, u2, 1.0, 1.0);
      s.u1 = std::move(pr.u1);
      s.u2 = std::move(pr.u2);
      s.T = ScalarField::sample(g, [&](double x1, double x2) {
        return ic.T_amplitude * std::cos(k * x1) * std::sin(mp * x2);
      });
      s.q = ScalarField::sample(g, [&](double x1, double x2) {
        return ic.q_amplitude * std::sin(k * x1) * std::sin(mp * x2);
      });
      return s;
    }
    case InitialSpec::Kind::file: {
      try {
        s = read_snapshot(ic.path, g);
      } catch (const SnapshotError& e) {
        throw ConfigError(e.what(), 0, "initial.path");
      }
      if (!boundary_rows_zero(s))
        throw ConfigError("initial state in " + ic.path + " does not vanish on the walls", 0,
                          "initial.path");
      // Only project when needed so that restarting from a snapshot is exact.
      if (divergence_relative(ops, s) > kDivergenceTolerance) {
        Projection pr = Projector(view).project(s.u1, s.u2, 1.0, 1.0);
        s.u1 = std::move(pr.u1);
        s.u2 = std::move(pr.u2);
      }
      s.time = 0.0;
      return s;
    }
  }
  return s;
}

Forcing make_forcing(const RunConfig& c, const Grid& g) {
  Forcing f(g);
  const ForcingSpec& fc = c.forcing;
  switch (fc.kind) {
    case ForcingSpec::Kind::zero:
      break;
    case ForcingSpec::Kind::constant:
      f.Q.fill(fc.Q0);
      f.G.fill(fc.G0);
      break;
    case ForcingSpec::Kind::single_mode: {
      const double k = fc.k;
      const double mp = fc.m * kPi;
      f.Q = ScalarField::sample(
          g, [&](double x1, double x2) { return fc.Q_amplitude * std::cos(k * x1) * std::sin(mp * x2); },
          Boundary::free);
      f.G = ScalarField::sample(
          g, [&](double x1, double x2) { return fc.G_amplitude * std::sin(k * x1) * std::sin(mp * x2); },
          Boundary::free);
      break;
    }
    case ForcingSpec::Kind::file: {
      try {
        auto [Q, G] = read_forcing_file(fc.path, g);
        f.Q = std::move(Q);
        f.G = std::move(G);
      } catch (const SnapshotError& e) {
        throw ConfigError(e.what(), 0, "forcing.path");
      }
      break;
    }
  }
  if (c.physical) {
    const SourceFactors factors = forcing_factors(*c.physical, c.humidity_source_scaling);
    f.Q *= factors.heat;
    f.G *= factors.humidity;
  }
  return f;
}

}  // namespace atmocirc
