#include "atmocirc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "atmocirc/mms.hpp"

namespace atmocirc {

namespace {

constexpr double kPi = std::numbers::pi;

// -Pr <sigma u, v>
double friction_pairing(const Matrix2& sigma, double Pr, const State& s, const State& v) {
  return -Pr * (sigma[0][0] * inner(s.u1, v.u1) + sigma[0][1] * inner(s.u2, v.u1) +
                sigma[1][0] * inner(s.u1, v.u2) + sigma[1][1] * inner(s.u2, v.u2));
}

double advection_pairing(const DifferentialOperators& ops, const State& s, const State& v) {
  return inner(ops.advect(s.u1, s.u2, s.u1), v.u1) + inner(ops.advect(s.u1, s.u2, s.u2), v.u2) +
         inner(ops.advect(s.u1, s.u2, s.T), v.T) + inner(ops.advect(s.u1, s.u2, s.q), v.q);
}

double norm_H1_full(const DifferentialOperators& ops, const State& s) {
  return std::sqrt(norm_H_sq(s) + h1_seminorm_sq(ops, s));
}

}  // namespace

EnergyBudget energy_identity(const DifferentialOperators& ops, const State& s, const Forcing& f,
                             const DimensionlessParams& d, CoriolisSign sign) {
  require_same_grid(ops.grid(), s.grid());
  if (!boundary_rows_zero(s))
    throw std::invalid_argument("energy_identity: state does not vanish on the walls");

  const Matrix2 sigma = friction_matrix(d, sign);
  const double Pr = d.Pr;

  EnergyBudget b;
  b.diffusion_u = -Pr * (ops.dirichlet_form(s.u1, s.u1) + ops.dirichlet_form(s.u2, s.u2));
  b.friction = friction_pairing(sigma, Pr, s, s);
  b.coupling_T = (Pr * d.R + 1.0) * inner(s.u2, s.T);
  b.coupling_q = -(Pr * d.R_tilde - 1.0) * inner(s.q, s.u2);
  b.diffusion_T = -ops.dirichlet_form(s.T, s.T);
  b.source_T = inner(f.Q, s.T);
  b.diffusion_q = -d.Le * ops.dirichlet_form(s.q, s.q);
  b.source_q = inner(f.G, s.q);
  b.advection_total = -advection_pairing(ops, s, s);
  const auto [p1, p2] = ops.gradient(s.p);
  b.pressure_work = -Pr * (inner(p1, s.u1) + inner(p2, s.u2));
  b.forcing_sq = inner(f.Q, f.Q) + inner(f.G, f.G);

  // Assemble the discrete tendency field by field and pair it with the state.
  const Tendency ex = explicit_tendency(ops, s, d, sign);
  ScalarField F1 = ex.u1;
  F1.axpy(Pr, ops.laplacian(s.u1)).axpy(-Pr, p1);
  ScalarField F2 = ex.u2;
  F2.axpy(Pr, ops.laplacian(s.u2)).axpy(-Pr, p2);
  ScalarField FT = ex.T;
  FT.axpy(1.0, ops.laplacian(s.T)).axpy(1.0, f.Q);
  ScalarField Fq = ex.q;
  Fq.axpy(d.Le, ops.laplacian(s.q)).axpy(1.0, f.G);
  for (ScalarField* F : {&F1, &F2, &FT, &Fq}) F->zero_walls();
  b.full = inner(F1, s.u1) + inner(F2, s.u2) + inner(FT, s.T) + inner(Fq, s.q);

  const double parts = b.reduced_sum() + b.advection_total + b.pressure_work;
  const double scale = std::abs(b.diffusion_u) + std::abs(b.friction) + std::abs(b.coupling_T) +
                       std::abs(b.coupling_q) + std::abs(b.diffusion_T) + std::abs(b.source_T) +
                       std::abs(b.diffusion_q) + std::abs(b.source_q) +
                       std::abs(b.advection_total) + std::abs(b.pressure_work);
  if (std::abs(b.full - parts) > kIdentityTolerance * scale) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "energy identity violated: full %.6e vs parts %.6e", b.full,
                  parts);
    throw std::logic_error(msg);
  }
  return b;
}

A1Certificate check_A1(const EnergyBudget& budget, double E, double D,
                       const DimensionlessParams& d, CoriolisSign sign) {
  A1Certificate c;
  c.C1 = 0.5 * std::min({d.Pr, 1.0, d.Le});
  c.C2 = d.Pr * std::abs(d.R) + d.Pr * std::abs(d.R_tilde) + 2.0 +
         d.Pr * operator_norm(friction_matrix(d, sign));
  c.C4 = budget.forcing_sq;
  c.lhs = budget.full;
  c.rhs = -c.C1 * D + c.C2 * (2.0 * E) + c.C4;
  c.margin = c.rhs - c.lhs;
  c.satisfied = c.margin >= -kCancellationTolerance * (1.0 + E + D);
  return c;
}

double weak_form(const DifferentialOperators& ops, const State& s, const State& psi,
                 const Forcing& f, const DimensionlessParams& d, CoriolisSign sign) {
  require_same_grid(s.grid(), psi.grid());
  const double Pr = d.Pr;
  double w = -Pr * (ops.dirichlet_form(s.u1, psi.u1) + ops.dirichlet_form(s.u2, psi.u2));
  w += friction_pairing(friction_matrix(d, sign), Pr, s, psi);
  w += Pr * (d.R * inner(s.T, psi.u2) - d.R_tilde * inner(s.q, psi.u2));
  w -= ops.dirichlet_form(s.T, psi.T);
  w += inner(s.u2, psi.T) + inner(f.Q, psi.T);
  w -= d.Le * ops.dirichlet_form(s.q, psi.q);
  w += inner(s.u2, psi.q) + inner(f.G, psi.q);
  w -= advection_pairing(ops, s, psi);
  return w;
}

std::vector<TestFunction> test_function_bank(const DifferentialOperators& ops,
                                             const Projector& projector) {
  const Grid& g = ops.grid();
  std::vector<TestFunction> bank;
  auto name = [](const char* field, bool is_sin, int k, int m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%s_k%d_m%d", field, is_sin ? "sin" : "cos", k, m);
    return std::string(buf);
  };
  for (const char* field : {"u", "T", "q"}) {
    for (bool is_sin : {false, true}) {
      for (int k = 0; k <= 2; ++k) {
        if (is_sin && k == 0) continue;
        for (int m = 1; m <= 2; ++m) {
          auto trig = [=](double x) { return is_sin ? std::sin(k * x) : std::cos(k * x); };
          auto dtrig = [=](double x) { return is_sin ? k * std::cos(k * x) : -k * std::sin(k * x); };
          State psi(g);
          const std::string f = field;
          if (f == "T" || f == "q") {
            ScalarField v = ScalarField::sample(
                g, [&](double x1, double x2) { return trig(x1) * std::sin(m * kPi * x2); });
            (f == "T" ? psi.T : psi.q) = std::move(v);
          } else {
            // Streamfunction trig(k x1) sin^2(m pi x2).
            ScalarField u1 = ScalarField::sample(g, [&](double x1, double x2) {
              return trig(x1) * m * kPi * std::sin(2.0 * m * kPi * x2);
            });
            ScalarField u2 = ScalarField::sample(g, [&](double x1, double x2) {
              const double s = std::sin(m * kPi * x2);
              return -dtrig(x1) * s * s;
            });
            Projection pr = projector.project(u1, u2, 1.0, 1.0);
            psi.u1 = std::move(pr.u1);
            psi.u2 = std::move(pr.u2);
          }
          bank.push_back({name(field, is_sin, k, m), std::move(psi)});
        }
      }
    }
  }
  return bank;
}

std::vector<double> weak_residual(const DifferentialOperators& ops, const Trajectory& traj,
                                  const State& v, const Forcing& f, const DimensionlessParams& d,
                                  CoriolisSign sign) {
  if (!boundary_rows_zero(v))
    throw std::invalid_argument("weak_residual: test function does not vanish on the walls");
  std::vector<double> r;
  if (traj.empty()) return r;
  r.reserve(traj.size());
  const double base = inner_product_H(traj.front(), v);
  double integral = 0.0;
  double prev = weak_form(ops, traj.front(), v, f, d, sign);
  r.push_back(0.0);
  for (std::size_t n = 1; n < traj.size(); ++n) {
    const double cur = weak_form(ops, traj[n], v, f, d, sign);
    integral += 0.5 * (traj[n].time - traj[n - 1].time) * (prev + cur);
    prev = cur;
    r.push_back(inner_product_H(traj[n], v) - base - integral);
  }
  return r;
}

A2Result check_A2(const DifferentialOperators& ops, const Trajectory& traj, const State& v,
                  const Forcing& f, const DimensionlessParams& d, const A2Options& options,
                  CoriolisSign sign) {
  if (options.levels < 2) throw std::invalid_argument("check_A2: need at least two levels");
  if (options.max_window >> (options.levels - 1) == 0)
    throw std::invalid_argument("check_A2: max_window too small for the number of levels");
  if (options.max_window >= traj.size())
    throw std::out_of_range("check_A2: window exceeds the trajectory");

  // Cumulative trapezoid integral of <F phi, v> over the snapshots.
  std::vector<double> cumulative(traj.size(), 0.0);
  double prev = weak_form(ops, traj.front(), v, f, d, sign);
  double phi_scale = norm_H1_full(ops, traj.front());
  for (std::size_t n = 1; n < traj.size(); ++n) {
    const double cur = weak_form(ops, traj[n], v, f, d, sign);
    cumulative[n] = cumulative[n - 1] + 0.5 * (traj[n].time - traj[n - 1].time) * (prev + cur);
    prev = cur;
    phi_scale = std::max(phi_scale, norm_H1_full(ops, traj[n]));
  }

  A2Result out;
  for (int m = 0; m < options.levels; ++m) {
    const std::size_t width = options.max_window >> m;
    double modulus = 0.0;
    double h = 0.0;
    for (std::size_t s = 0; s + width < traj.size(); ++s) {
      modulus = std::max(modulus, std::abs(cumulative[s + width] - cumulative[s]));
      h = std::max(h, traj[s + width].time - traj[s].time);
    }
    out.widths.push_back(h);
    out.moduli.push_back(modulus);
  }

  const double floor = 1e-12 * out.widths.front() * norm_H1_full(ops, v) * (1.0 + phi_scale);
  out.degenerate = std::ranges::all_of(out.moduli, [&](double w) { return w <= floor; });
  if (out.degenerate) {
    out.passed = true;
    return out;
  }
  std::vector<double> h, w;
  for (std::size_t n = 0; n < out.widths.size(); ++n) {
    if (out.moduli[n] > 0.0) {
      h.push_back(out.widths[n]);
      w.push_back(out.moduli[n]);
    }
  }
  out.slope = h.size() >= 2 ? fitted_order(h, w) : 0.0;
  out.passed = out.slope >= kA2MinExponent;
  return out;
}

double divergence_relative(const DifferentialOperators& ops, const State& s) {
  const double div = ops.divergence(s.u1, s.u2).max_abs();
  if (div == 0.0) return 0.0;
  const double norm = std::sqrt(inner(s.u1, s.u1) + inner(s.u2, s.u2) +
                                velocity_h1_seminorm_sq(ops, s));
  return norm > 0.0 ? div / norm : INFINITY;
}

bool DiagnosticsRecord::cancellation_holds() const noexcept {
  return std::abs(budget.advection_total) + std::abs(budget.pressure_work) <=
         kCancellationTolerance * (1.0 + E + D);
}

DiagnosticsMonitor::DiagnosticsMonitor(std::shared_ptr<const DifferentialOperators> ops,
                                       const DimensionlessParams& d, Forcing forcing,
                                       CoriolisSign sign)
    : ops_(std::move(ops)), params_(d), forcing_(std::move(forcing)), sign_(sign) {
  Projector projector(ops_);
  bank_ = test_function_bank(*ops_, projector);
}

DiagnosticsRecord DiagnosticsMonitor::record(const State& s) {
  DiagnosticsRecord r;
  r.time = s.time;
  r.E = 0.5 * norm_H_sq(s);
  r.D = h1_seminorm_sq(*ops_, s);
  r.divergence_inf = ops_->divergence(s.u1, s.u2).max_abs();
  r.divergence_rel = divergence_relative(*ops_, s);
  r.budget = energy_identity(*ops_, s, forcing_, params_, sign_);
  r.a1 = check_A1(r.budget, r.E, r.D, params_, sign_);

  const std::size_t n = bank_.size();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = weak_form(*ops_, s, bank_[k].psi, forcing_, params_, sign_);
  if (!started_) {
    initial_pairing_.resize(n);
    for (std::size_t k = 0; k < n; ++k) initial_pairing_[k] = inner_product_H(s, bank_[k].psi);
    integral_.assign(n, 0.0);
    started_ = true;
  } else {
    const double dt = s.time - last_time_;
    for (std::size_t k = 0; k < n; ++k) integral_[k] += 0.5 * dt * (last_integrand_[k] + g[k]);
  }
  r.weak_residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    r.weak_residuals[k] = inner_product_H(s, bank_[k].psi) - initial_pairing_[k] - integral_[k];
  last_integrand_ = std::move(g);
  last_time_ = s.time;
  return r;
}

std::vector<std::string> DiagnosticsMonitor::csv_header() const {
  std::vector<std::string> h{"time", "E", "D", "div_inf", "adv_total", "press_work", "A1_margin"};
  for (const TestFunction& t : bank_) h.push_back("r_" + t.name);
  return h;
}

std::string DiagnosticsMonitor::csv_row(const DiagnosticsRecord& r) {
  std::string line;
  char buf[32];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (!line.empty()) line += ',';
    line += buf;
  };
  put(r.time);
  put(r.E);
  put(r.D);
  put(r.divergence_inf);
  put(r.budget.advection_total);
  put(r.budget.pressure_work);
  put(r.a1.margin);
  for (double w : r.weak_residuals) put(w);
  return line;
}

}  // namespace atmocirc
