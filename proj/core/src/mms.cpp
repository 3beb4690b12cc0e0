#include "atmocirc/mms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace atmocirc {

namespace {

constexpr double pi = std::numbers::pi;

/// Value, first derivatives and Laplacian of one field at a point
/// (without the time factor).
struct Jet {
  double v = 0.0, d1 = 0.0, d2 = 0.0, lap = 0.0;
};

struct Jets {
  Jet u1, u2, T, q;
};

Jets spatial_jets(double a, double x1, double x2) {
  const double sx = std::sin(x1), cx = std::cos(x1);
  const double s = std::sin(pi * x2), c = std::cos(pi * x2);
  const double s2 = std::sin(2.0 * pi * x2), c2 = std::cos(2.0 * pi * x2);
  Jets j;
  j.u1 = {a * pi * sx * s2, a * pi * cx * s2, a * 2.0 * pi * pi * sx * c2,
          -a * pi * sx * s2 * (1.0 + 4.0 * pi * pi)};
  j.u2 = {-a * cx * s * s, a * sx * s * s, -a * pi * cx * s2,
          a * cx * s * s - a * 2.0 * pi * pi * cx * c2};
  j.T = {a * sx * s, a * cx * s, a * pi * sx * c, -(1.0 + pi * pi) * a * sx * s};
  j.q = {a * cx * s, -a * sx * s, a * pi * cx * c, -(1.0 + pi * pi) * a * cx * s};
  return j;
}

double l2_distance(const ScalarField& a, const ScalarField& b) {
  const ScalarField e = a - b;
  return std::sqrt(inner(e, e));
}

MmsErrors distance(const State& a, const State& b) {
  return {l2_distance(a.u1, b.u1), l2_distance(a.u2, b.u2), l2_distance(a.T, b.T),
          l2_distance(a.q, b.q)};
}

}  // namespace

ManufacturedSolution::ManufacturedSolution(const DimensionlessParams& d, double amplitude,
                                           CoriolisSign sign)
    : params_(d), amplitude_(amplitude), sign_(sign) {
  validate(d);
}

PointValues ManufacturedSolution::exact(double x1, double x2, double t) const {
  const Jets j = spatial_jets(amplitude_, x1, x2);
  const double tau = std::cos(t);
  return {j.u1.v * tau, j.u2.v * tau, j.T.v * tau, j.q.v * tau};
}

PointValues ManufacturedSolution::sources(double x1, double x2, double t) const {
  const Jets j = spatial_jets(amplitude_, x1, x2);
  const double tau = std::cos(t);
  const double dtau = -std::sin(t);
  const DimensionlessParams& d = params_;
  const Matrix2 sigma = friction_matrix(d, sign_);

  const double u1 = j.u1.v * tau, u2 = j.u2.v * tau;
  const double T = j.T.v * tau, q = j.q.v * tau;
  auto transport = [&](const Jet& f) { return (u1 * f.d1 + u2 * f.d2) * tau; };

  PointValues s;
  s.u1 = j.u1.v * dtau -
         (d.Pr * (j.u1.lap * tau - (sigma[0][0] * u1 + sigma[0][1] * u2)) - transport(j.u1));
  s.u2 = j.u2.v * dtau - (d.Pr * (j.u2.lap * tau - (sigma[1][0] * u1 + sigma[1][1] * u2)) +
                          d.Pr * (d.R * T - d.R_tilde * q) - transport(j.u2));
  s.T = j.T.v * dtau - (j.T.lap * tau + u2 - transport(j.T));
  s.q = j.q.v * dtau - (d.Le * j.q.lap * tau + u2 - transport(j.q));
  return s;
}

State ManufacturedSolution::exact_state(const Grid& grid, double t) const {
  State s(grid);
  s.u1 = ScalarField::sample(grid, [&](double x, double y) { return exact(x, y, t).u1; });
  s.u2 = ScalarField::sample(grid, [&](double x, double y) { return exact(x, y, t).u2; });
  s.T = ScalarField::sample(grid, [&](double x, double y) { return exact(x, y, t).T; });
  s.q = ScalarField::sample(grid, [&](double x, double y) { return exact(x, y, t).q; });
  s.time = t;
  return s;
}

Forcing ManufacturedSolution::forcing(const Grid& grid, double t) const {
  Forcing f(grid);
  auto at = [&](auto member) {
    return ScalarField::sample(
        grid, [&](double x, double y) { return sources(x, y, t).*member; }, Boundary::free);
  };
  f.Q = at(&PointValues::T);
  f.G = at(&PointValues::q);
  f.momentum1 = at(&PointValues::u1);
  f.momentum2 = at(&PointValues::u2);
  return f;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = std::min(h.size(), err.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

MmsRun run_mms(const ManufacturedSolution& mms, const Grid& grid, double dt, double t_end,
               DiffusionScheme scheme, const OperatorConfig& ops_config) {
  const int steps = std::max(1, int(std::lround(t_end / dt)));
  StepConfig config;
  config.dt = t_end / steps;
  config.t_end = t_end;
  config.diffusion_scheme = scheme;
  config.explicit_scheme = ExplicitScheme::ab2;

  auto ops = std::make_shared<const DifferentialOperators>(grid, ops_config);
  Stepper stepper(ops, mms.params(), config, mms.sign());
  const double theta = stepper.theta();

  State state = mms.exact_state(grid, 0.0);
  {
    Projection p = stepper.projector().project(state.u1, state.u2, 1.0, 1.0);
    state.u1 = std::move(p.u1);
    state.u2 = std::move(p.u2);
  }

  MmsRun run;
  run.n1 = grid.n1();
  run.n2 = grid.n2();
  run.dt = config.dt;
  run.steps = steps;
  for (int n = 0; n < steps; ++n) {
    const Forcing f = mms.forcing(grid, state.time + theta * config.dt);
    const StepReport r = stepper.step(state, f);
    const double scale = std::sqrt(norm_H_sq(state) + h1_seminorm_sq(*ops, state));
    if (scale > 0.0)
      run.max_divergence_rel = std::max(run.max_divergence_rel, r.divergence_inf / scale);
    run.walls_exact = run.walls_exact && boundary_rows_zero(state);
  }
  run.error = distance(state, mms.exact_state(grid, state.time));
  run.final_state = std::move(state);
  return run;
}

namespace {

std::vector<double> pick(const std::vector<MmsErrors>& e, double MmsErrors::*m) {
  std::vector<double> out;
  for (const auto& x : e) out.push_back(x.*m);
  return out;
}

MmsErrors orders(const std::vector<double>& h, const std::vector<MmsErrors>& e) {
  return {fitted_order(h, pick(e, &MmsErrors::u1)), fitted_order(h, pick(e, &MmsErrors::u2)),
          fitted_order(h, pick(e, &MmsErrors::T)), fitted_order(h, pick(e, &MmsErrors::q))};
}

}  // namespace

ConvergenceReport verify_mms(const MmsOptions& options) {
  const ManufacturedSolution mms(options.params, options.amplitude, options.sign);
  ConvergenceReport report;

  std::vector<double> h;
  std::vector<MmsErrors> errs;
  for (auto [n1, n2] : options.spatial_grids) {
    const Grid grid(n1, n2);
    const double dt = options.dt_factor * grid.dx2() * grid.dx2();
    report.spatial.push_back(
        run_mms(mms, grid, dt, options.t_end, DiffusionScheme::crank_nicolson, options.operators));
    h.push_back(grid.dx2());
    errs.push_back(report.spatial.back().error);
  }
  report.spatial_order = orders(h, errs);

  const Grid tgrid(options.temporal_grid.first, options.temporal_grid.second);
  for (double dt : options.temporal_dts)
    report.temporal.push_back(
        run_mms(mms, tgrid, dt, options.t_end, options.temporal_scheme, options.operators));
  std::vector<double> dts;
  for (std::size_t i = 0; i + 1 < report.temporal.size(); ++i) {
    report.temporal_differences.push_back(
        distance(*report.temporal[i].final_state, *report.temporal[i + 1].final_state));
    dts.push_back(report.temporal[i].dt);
  }
  report.temporal_order = orders(dts, report.temporal_differences);
  return report;
}

bool ConvergenceReport::passed(double min_order) const {
  auto ok = [min_order](const MmsErrors& e) {
    return e.u1 >= min_order && e.u2 >= min_order && e.T >= min_order && e.q >= min_order;
  };
  return ok(spatial_order) && ok(temporal_order);
}

}  // namespace atmocirc
