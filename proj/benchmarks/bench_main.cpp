#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "atmocirc/diagnostics.hpp"
#include "atmocirc/stepper.hpp"

using namespace atmocirc;

namespace {

std::shared_ptr<const DifferentialOperators> make_ops(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  return std::make_shared<const DifferentialOperators>(Grid(n, n + 1));
}

State smooth_state(const DifferentialOperators& ops, const Projector& projector) {
  const Grid& g = ops.grid();
  constexpr double pi = std::numbers::pi;
  State s(g);
  ScalarField u1 = ScalarField::sample(
      g, [](double x1, double x2) { return std::sin(x1) * pi * std::sin(2 * pi * x2); });
  ScalarField u2 = ScalarField::sample(g, [](double x1, double x2) {
    const double w = std::sin(pi * x2);
    return -std::cos(x1) * w * w;
  });
  Projection pr = projector.project(u1, u2, 1.0, 1.0);
  s.u1 = std::move(pr.u1);
  s.u2 = std::move(pr.u2);
  s.T = ScalarField::sample(g, [](double x1, double x2) { return std::cos(x1) * std::sin(pi * x2); });
  s.q = ScalarField::sample(g, [](double x1, double x2) { return std::sin(x1) * std::sin(pi * x2); });
  return s;
}

DimensionlessParams params() {
  DimensionlessParams d;
  d.Le = 0.5;
  d.R = 50.0;
  d.R_tilde = 10.0;
  return d;
}

void BM_Advect(benchmark::State& st) {
  auto ops = make_ops(st);
  Projector projector(ops);
  const State s = smooth_state(*ops, projector);
  for (auto _ : st) benchmark::DoNotOptimize(ops->advect(s.u1, s.u2, s.T));
}

void BM_Project(benchmark::State& st) {
  auto ops = make_ops(st);
  Projector projector(ops);
  const State s = smooth_state(*ops, projector);
  ScalarField u1 = s.u1;
  u1.axpy(1.0, s.T);
  for (auto _ : st) benchmark::DoNotOptimize(projector.project(u1, s.u2, 1e-3, 1.0));
}

void BM_Step(benchmark::State& st) {
  auto ops = make_ops(st);
  Stepper stepper(ops, params(), {.dt = 1e-4});
  State s = smooth_state(*ops, stepper.projector());
  Forcing f(ops->grid());
  f.Q.fill(0.1);
  f.G.fill(0.1);
  for (auto _ : st) benchmark::DoNotOptimize(stepper.step(s, f));
}

void BM_EnergyIdentity(benchmark::State& st) {
  auto ops = make_ops(st);
  Projector projector(ops);
  const State s = smooth_state(*ops, projector);
  const Forcing f(ops->grid());
  for (auto _ : st) benchmark::DoNotOptimize(energy_identity(*ops, s, f, params()));
}

}  // namespace

BENCHMARK(BM_Advect)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Project)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Step)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyIdentity)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
