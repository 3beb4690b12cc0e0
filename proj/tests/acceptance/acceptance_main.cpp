// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "atmocirc/config.hpp"
#include "atmocirc/diagnostics.hpp"
#include "atmocirc/mms.hpp"
#include "atmocirc/run.hpp"
#include "oracles.hpp"

using namespace atmocirc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s AC%d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Constraint bookkeeping shared by every run below.
struct Constraints {
  double max_divergence_rel = 0.0;
  bool walls = true;
  long checked = 0;

  void observe(const DifferentialOperators& ops, const State& s) {
    max_divergence_rel = std::max(max_divergence_rel, divergence_relative(ops, s));
    walls = walls && boundary_rows_zero(s);
    ++checked;
  }
};

Constraints constraints;

// Heat decay T = exp(-pi^2 t) sin(pi x2) with u = q = 0.
Trajectory heat_decay(const std::shared_ptr<const DifferentialOperators>& ops, double dt,
                      double t_end, DiffusionScheme scheme) {
  const Grid& g = ops->grid();
  Stepper stepper(ops, DimensionlessParams{}, {.dt = dt, .diffusion_scheme = scheme});
  State s(g);
  s.T = ScalarField::sample(g, [](double, double x2) { return std::sin(oracle::pi * x2); });
  const Forcing f(g);
  Trajectory traj{s};
  const long steps = std::lround(t_end / dt);
  for (long n = 1; n <= steps; ++n) {
    stepper.step(s, f);
    s.time = n * dt;
    constraints.observe(*ops, s);
    traj.push_back(s);
  }
  return traj;
}

const char* kTrajectoryConfig = R"([dimensionless]
Pr = 1
Le = 0.5
R = 50
R_tilde = 10
[grid]
n1 = 32
n2 = 33
[time]
dt = 1e-3
t_end = 1
snapshot_interval = 10
[initial]
kind = single_mode
u_amplitude = 1
T_amplitude = 1
q_amplitude = 1
k = 1
m = 1
[forcing]
kind = constant
Q0 = 0.1
G0 = 0.1
)";

void ac1_cancellation() {
  const auto t0 = Clock::now();
  auto ops = oracle::make_ops(32, 33);
  const Grid& g = ops->grid();
  Projector projector(ops);
  std::mt19937_64 rng(2024);
  DimensionlessParams d;
  d.Pr = 1.0;
  d.Le = 0.5;
  d.R = 50.0;
  d.R_tilde = 10.0;
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const double amp = std::pow(10.0, trial % 5 - 2);
    State s(g);
    auto [u1, u2] = oracle::random_solenoidal(projector, g, rng, amp);
    s.u1 = std::move(u1);
    s.u2 = std::move(u2);
    s.T = oracle::random_smooth(g, rng, amp);
    s.q = oracle::random_smooth(g, rng, amp);
    s.p = oracle::random_field(g, rng, Boundary::free);
    Forcing f(g);
    f.Q = oracle::random_smooth(g, rng);
    f.G = oracle::random_smooth(g, rng);
    const EnergyBudget b = energy_identity(*ops, s, f, d);
    const double E = 0.5 * norm_H_sq(s);
    const double D = h1_seminorm_sq(*ops, s);
    const double ratio = (std::abs(b.advection_total) + std::abs(b.pressure_work)) / (1.0 + E + D);
    worst = std::max(worst, ratio);
    ok = ok && ratio <= kCancellationTolerance;
  }
  const double elapsed = seconds_since(t0);
  report(1, "energy cancellation", ok && elapsed < 10.0,
         fmt("50 states, max (|adv|+|press|)/(1+E+D) = %.3e (tol %.0e), %.2f s (limit 10 s)", worst,
             kCancellationTolerance, elapsed));
}

void ac2_ac3_trajectory() {
  const auto t0 = Clock::now();
  const RunConfig c = parse_config(kTrajectoryConfig);
  const DimensionlessParams d = c.params();
  auto ops = std::make_shared<const DifferentialOperators>(c.grid(), c.numerics);
  State s = initial_state(c, *ops);
  const Forcing f = make_forcing(c, c.grid());
  Stepper stepper(ops, d, c.step);

  auto a1_margin = [&](const State& x, bool& ok) {
    const EnergyBudget b = energy_identity(*ops, x, f, d);
    const A1Certificate cert = check_A1(b, 0.5 * norm_H_sq(x), h1_seminorm_sq(*ops, x), d);
    ok = ok && cert.satisfied;
    return cert.margin;
  };

  bool a1_ok = true;
  double min_margin = a1_margin(s, a1_ok);
  Trajectory traj{s};
  constraints.observe(*ops, s);
  for (int n = 1; n <= 1000; ++n) {
    stepper.step(s, f);
    s.time = n * c.step.dt;
    constraints.observe(*ops, s);
    min_margin = std::min(min_margin, a1_margin(s, a1_ok));
    traj.push_back(s);
  }
  const double elapsed = seconds_since(t0);
  report(2, "energy inequality (A1)", a1_ok && elapsed < 60.0,
         fmt("1001 states, min margin %.4g, %.2f s (limit 60 s)", min_margin, elapsed));

  const auto t1 = Clock::now();
  Projector projector(ops);
  const auto bank = test_function_bank(*ops, projector);
  double min_slope = std::numeric_limits<double>::infinity();
  std::string worst;
  bool a2_ok = true;
  int degenerate = 0;
  for (const TestFunction& t : bank) {
    const A2Result r = check_A2(*ops, traj, t.psi, f, d, {.max_window = 16, .levels = 5});
    a2_ok = a2_ok && r.passed;
    if (r.degenerate) {
      ++degenerate;
    } else if (r.slope < min_slope) {
      min_slope = r.slope;
      worst = t.name;
    }
  }
  report(3, "time regularity (A2)", a2_ok,
         fmt("%zu test functions, min slope %.3f (%s), %d degenerate, need >= %.2f, %.2f s",
             bank.size(), min_slope, worst.c_str(), degenerate, kA2MinExponent, seconds_since(t1)));
}

void ac4_weak_residual() {
  const auto t0 = Clock::now();
  auto ops = oracle::make_ops(16, 33);
  Projector projector(ops);
  const auto bank = test_function_bank(*ops, projector);
  const Forcing f(ops->grid());
  const std::vector<double> dts{4e-3, 2e-3, 1e-3};
  std::vector<double> res;
  for (double dt : dts) {
    const Trajectory traj = heat_decay(ops, dt, 0.1, DiffusionScheme::backward_euler);
    double m = 0.0;
    for (const TestFunction& t : bank)
      for (double r : weak_residual(*ops, traj, t.psi, f, DimensionlessParams{}))
        m = std::max(m, std::abs(r));
    res.push_back(m);
  }
  const double order = oracle::slope(dts, res);
  report(4, "weak-solution residual", order >= 0.9,
         fmt("max |r| = %.3e, %.3e, %.3e for dt = 4e-3, 2e-3, 1e-3 (backward Euler), order %.3f "
             "(need >= 0.9), %.2f s",
             res[0], res[1], res[2], order, seconds_since(t0)));
}

void ac5_mms() {
  const auto t0 = Clock::now();
  const ConvergenceReport r = verify_mms(MmsOptions{});
  for (const MmsRun& run : r.spatial) {
    constraints.max_divergence_rel = std::max(constraints.max_divergence_rel, run.max_divergence_rel);
    constraints.walls = constraints.walls && run.walls_exact;
  }
  for (const MmsRun& run : r.temporal) {
    constraints.max_divergence_rel = std::max(constraints.max_divergence_rel, run.max_divergence_rel);
    constraints.walls = constraints.walls && run.walls_exact;
  }
  const double elapsed = seconds_since(t0);
  const MmsErrors& s = r.spatial_order;
  const MmsErrors& t = r.temporal_order;
  report(5, "manufactured-solution convergence", r.passed(1.9) && elapsed < 300.0,
         fmt("spatial orders u1 %.3f u2 %.3f T %.3f q %.3f; temporal (Crank-Nicolson) u1 %.3f "
             "u2 %.3f T %.3f q %.3f; need >= 1.9, %.2f s (limit 300 s)",
             s.u1, s.u2, s.T, s.q, t.u1, t.u2, t.T, t.q, elapsed));
}

void ac6_heat_decay() {
  auto ops = oracle::make_ops(16, 33);
  const Trajectory traj = heat_decay(ops, 1e-4, 0.1, DiffusionScheme::crank_nicolson);
  const ScalarField exact = ScalarField::sample(ops->grid(), [](double, double x2) {
    return std::exp(-oracle::pi * oracle::pi * 0.1) * std::sin(oracle::pi * x2);
  });
  const double err = oracle::max_diff(traj.back().T, exact);
  const bool still = traj.back().u1.max_abs() == 0.0 && traj.back().u2.max_abs() == 0.0;
  report(6, "analytic heat decay", err <= 1e-3 && still,
         fmt("max |T - exact| at t = %.3g is %.3e (tol 1e-3), velocity stays zero: %s",
             traj.back().time, err, still ? "yes" : "no"));
}

void ac7_constraints() {
  report(7, "constraint maintenance",
         constraints.max_divergence_rel <= kDivergenceTolerance && constraints.walls,
         fmt("%ld states checked plus MMS runs, max relative divergence %.3e (tol %.0e), walls "
             "exactly zero: %s",
             constraints.checked, constraints.max_divergence_rel, kDivergenceTolerance,
             constraints.walls ? "yes" : "no"));
}

void ac8_nondimensionalization() {
  PhysicalParams p;
  p.nu = 0.01;
  p.kappa_T = 0.01;
  p.kappa_q = 0.02;
  p.alpha_T = 1e-3;
  p.alpha_q = 2e-3;
  p.g = 10.0;
  p.h = 1.0;
  p.T_bottom = 10.0;
  p.T_top = 0.0;
  p.q_bottom = 0.5;
  p.q_top = 0.1;
  const DimensionlessParams d = nondimensionalize(p);
  // Hand evaluation: 10 * 1e-3 * 10 * 1 / (1e-2 * 1e-2) = 1000.
  const double R_err = std::abs(d.R - 1000.0) / 1000.0;
  const bool pr = d.Pr == 1.0;
  const bool r = R_err <= 4.0 * std::numeric_limits<double>::epsilon();
  const bool zero = d.omega == 0.0 && d.sigma0p == 0.0 && d.sigma1p == 0.0;
  report(8, "nondimensionalization", pr && r && zero,
         fmt("Pr = %.17g, R = %.17g (relative error %.2e), omega = %g, sigma0p = %g, sigma1p = %g",
             d.Pr, d.R, R_err, d.omega, d.sigma0p, d.sigma1p));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ac9_determinism() {
  const auto t0 = Clock::now();
  const RunConfig c = parse_config(kTrajectoryConfig);
  const fs::path root = fs::temp_directory_path() / "atmocirc_acceptance";
  fs::remove_all(root);
  std::ostringstream log;
  const int a = run(c, root / "a", log);
  const int b = run(c, root / "b", log);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(root / "a"))
    if (e.path().extension() == ".csv") files.push_back(e.path().filename());
  std::size_t identical = 0;
  for (const fs::path& f : files)
    if (fs::exists(root / "b" / f) && slurp(root / "a" / f) == slurp(root / "b" / f)) ++identical;
  const bool ok = a == 0 && b == 0 && !files.empty() && identical == files.size();
  report(9, "determinism", ok,
         fmt("two runs of the 1000-step trajectory, %zu/%zu CSV files bit-identical, %.2f s",
             identical, files.size(), seconds_since(t0)));
  if (ok) fs::remove_all(root);
}

}  // namespace

int main() {
  setenv("ATMOCIRC_THREADS", "1", 0);
  const auto t0 = Clock::now();
  ac1_cancellation();
  ac2_ac3_trajectory();
  ac4_weak_residual();
  ac5_mms();
  ac6_heat_decay();
  ac7_constraints();
  ac8_nondimensionalization();
  ac9_determinism();
  std::printf("%d of 9 criteria failed, %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
