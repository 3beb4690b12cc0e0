#include "atmocirc/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "atmocirc/parallel.hpp"

namespace atmocirc {

void validate(const StepConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ParameterError("dt", "must be positive");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end))
    throw ParameterError("t_end", "must be non-negative");
  if (c.snapshot_interval < 1) throw ParameterError("snapshot_interval", "must be >= 1");
}

Forcing::Forcing(const Grid& grid) : Q(grid, Boundary::free), G(grid, Boundary::free) {}

Tendency::Tendency(const Grid& grid) : u1(grid), u2(grid), T(grid), q(grid) {}

NumericalBreakdown::NumericalBreakdown(std::string field, double time)
    : std::runtime_error("non-finite value in field " + field + " at t = " +
                         std::to_string(time)),
      field_(std::move(field)),
      time_(time) {}

Tendency explicit_tendency(const DifferentialOperators& ops, const State& s,
                           const DimensionlessParams& d, CoriolisSign sign) {
  const Matrix2 sigma = friction_matrix(d, sign);
  Tendency t(s.grid());
  t.u1 = ops.advect(s.u1, s.u2, s.u1);
  t.u1 *= -1.0;
  t.u1.axpy(-d.Pr * sigma[0][0], s.u1).axpy(-d.Pr * sigma[0][1], s.u2);

  t.u2 = ops.advect(s.u1, s.u2, s.u2);
  t.u2 *= -1.0;
  t.u2.axpy(-d.Pr * sigma[1][0], s.u1).axpy(-d.Pr * sigma[1][1], s.u2);
  t.u2.axpy(d.Pr * d.R, s.T).axpy(-d.Pr * d.R_tilde, s.q);

  t.T = ops.advect(s.u1, s.u2, s.T);
  t.T *= -1.0;
  t.T += s.u2;

  t.q = ops.advect(s.u1, s.u2, s.q);
  t.q *= -1.0;
  t.q += s.u2;

  for (ScalarField* f : {&t.u1, &t.u2, &t.T, &t.q}) {
    f->zero_walls();
    f->set_boundary(Boundary::dirichlet_zero);
  }
  return t;
}

Tendency rhs_explicit(const DifferentialOperators& ops, const State& s, const Forcing& f,
                      const DimensionlessParams& d, CoriolisSign sign) {
  Tendency t = explicit_tendency(ops, s, d, sign);
  t.T += f.Q;
  t.q += f.G;
  if (f.momentum1) t.u1 += *f.momentum1;
  if (f.momentum2) t.u2 += *f.momentum2;
  for (ScalarField* x : {&t.u1, &t.u2, &t.T, &t.q}) x->zero_walls();
  return t;
}

double cfl_number(const State& s, double dt) {
  const Grid& g = s.grid();
  double m = 0.0;
  auto a = s.u1.values();
  auto b = s.u2.values();
  for (std::size_t n = 0; n < a.size(); ++n)
    m = std::max(m, std::abs(a[n]) / g.dx1() + std::abs(b[n]) / g.dx2());
  return dt * m;
}

Stepper::Stepper(std::shared_ptr<const DifferentialOperators> ops, const DimensionlessParams& d,
                 const StepConfig& c, CoriolisSign sign)
    : ops_(std::move(ops)), params_(d), config_(c), sign_(sign), projector_(ops_) {
  validate(d);
  validate(c);
  const Grid& g = ops_->grid();
  const int interior = g.n2() - 2;
  const double invh2 = 1.0 / (g.dx2() * g.dx2());
  const double diffusivity[3] = {d.Pr, 1.0, d.Le};
  for (int which = 0; which < 3; ++which) {
    const double a = theta() * c.dt * diffusivity[which];
    systems_[which].reserve(ops_->modes());
    for (int k = 0; k < ops_->modes(); ++k) {
      Tridiagonal t(interior);
      for (int j = 0; j < interior; ++j) {
        t.lower[j] = -a * invh2;
        t.upper[j] = -a * invh2;
        t.diag[j] = 1.0 - a * ops_->d11_symbol(k) + 2.0 * a * invh2;
      }
      systems_[which].push_back(std::move(t));
    }
  }
}

double Stepper::theta() const noexcept {
  return config_.diffusion_scheme == DiffusionScheme::crank_nicolson ? 0.5 : 1.0;
}

ScalarField Stepper::solve_diffusion(const ScalarField& rhs, int which) const {
  const Grid& g = ops_->grid();
  Spectrum s = ops_->fourier().forward(rhs);
  const int interior = g.n2() - 2;
  const auto& systems = systems_[which];
  parallel_for(s.modes(), [&](int begin, int end) {
    std::vector<double> re(interior), im(interior);
    for (int k = begin; k < end; ++k) {
      for (int j = 0; j < interior; ++j) {
        re[j] = s(k, j + 1).real();
        im[j] = s(k, j + 1).imag();
      }
      solve_tridiagonal(systems[k], re);
      solve_tridiagonal(systems[k], im);
      for (int j = 0; j < interior; ++j) s(k, j + 1) = {re[j], im[j]};
      s(k, 0) = 0.0;
      s(k, g.n2() - 1) = 0.0;
    }
  });
  ScalarField out = ops_->fourier().inverse(s, Boundary::dirichlet_zero);
  out.zero_walls();
  return out;
}

StepReport Stepper::step(State& s, const Forcing& f) {
  const DifferentialOperators& ops = *ops_;
  require_same_grid(ops.grid(), s.grid());
  const double dt = config_.dt;
  const double th = theta();
  const DimensionlessParams& d = params_;

  StepReport report;
  report.cfl = cfl_number(s, dt);
  report.cfl_exceeded = report.cfl > kCflLimit;

  Tendency now = explicit_tendency(ops, s, d, sign_);
  Tendency expl = now;
  if (config_.explicit_scheme == ExplicitScheme::ab2 && previous_) {
    for (auto [e, n, p] : {std::tuple{&expl.u1, &now.u1, &previous_->u1},
                           std::tuple{&expl.u2, &now.u2, &previous_->u2},
                           std::tuple{&expl.T, &now.T, &previous_->T},
                           std::tuple{&expl.q, &now.q, &previous_->q}}) {
      *e = 1.5 * *n;
      e->axpy(-0.5, *p);
    }
  }

  auto predictor_rhs = [&](const ScalarField& x, const ScalarField& tend, double nu) {
    ScalarField b = x;
    b.axpy(dt, tend);
    if (th < 1.0) b.axpy((1.0 - th) * dt * nu, ops.laplacian(x));
    return b;
  };

  ScalarField b1 = predictor_rhs(s.u1, expl.u1, d.Pr);
  ScalarField b2 = predictor_rhs(s.u2, expl.u2, d.Pr);
  ScalarField bT = predictor_rhs(s.T, expl.T, 1.0);
  ScalarField bq = predictor_rhs(s.q, expl.q, d.Le);
  if (f.momentum1) b1.axpy(dt, *f.momentum1);
  if (f.momentum2) b2.axpy(dt, *f.momentum2);
  bT.axpy(dt, f.Q);
  bq.axpy(dt, f.G);
  {
    auto [p1, p2] = ops.gradient(s.p);
    b1.axpy(-dt * d.Pr, p1);
    b2.axpy(-dt * d.Pr, p2);
  }

  ScalarField star1 = solve_diffusion(b1, 0);
  ScalarField star2 = solve_diffusion(b2, 0);
  State next(s.grid());
  next.T = solve_diffusion(bT, 1);
  next.q = solve_diffusion(bq, 2);

  Projection proj = projector_.project(star1, star2, dt, d.Pr);
  next.u1 = std::move(proj.u1);
  next.u2 = std::move(proj.u2);
  next.p = s.p;
  next.p += proj.phi;
  next.time = s.time + dt;

  if (std::string bad = first_nonfinite_field(next); !bad.empty())
    throw NumericalBreakdown(bad, next.time);

  report.divergence_inf = ops.divergence(next.u1, next.u2).max_abs();
  s = std::move(next);
  previous_ = std::move(now);
  return report;
}

State step(std::shared_ptr<const DifferentialOperators> ops, const State& s, const Forcing& f,
           const DimensionlessParams& d, const StepConfig& c, CoriolisSign sign) {
  Stepper stepper(std::move(ops), d, c, sign);
  State out = s;
  stepper.step(out, f);
  return out;
}

}  // namespace atmocirc
