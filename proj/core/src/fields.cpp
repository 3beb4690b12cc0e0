#include "atmocirc/fields.hpp"

#include <algorithm>
#include <cmath>

namespace atmocirc {

Grid::Grid(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 4 || n1 % 2 != 0)
    throw std::invalid_argument("grid: n1 must be even and >= 4, got " + std::to_string(n1));
  if (n2 < 3) throw std::invalid_argument("grid: n2 must be >= 3, got " + std::to_string(n2));
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw GridMismatch("grid mismatch: " + std::to_string(a.n1()) + "x" + std::to_string(a.n2()) +
                       " vs " + std::to_string(b.n1()) + "x" + std::to_string(b.n2()));
  }
}

ScalarField::ScalarField(const Grid& grid, Boundary bc)
    : grid_(grid), bc_(bc), v_(grid.size(), 0.0) {}

void ScalarField::fill(double value) {
  std::fill(v_.begin(), v_.end(), value);
  if (bc_ == Boundary::dirichlet_zero) zero_walls();
}

void ScalarField::zero_walls() noexcept {
  for (double& x : row(0)) x = 0.0;
  for (double& x : row(grid_.n2() - 1)) x = 0.0;
}

bool ScalarField::walls_are_zero() const noexcept {
  auto zero = [](double x) { return x == 0.0; };
  return std::ranges::all_of(row(0), zero) && std::ranges::all_of(row(grid_.n2() - 1), zero);
}

bool ScalarField::all_finite() const noexcept {
  return std::ranges::all_of(v_, [](double x) { return std::isfinite(x); });
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& x : v_) x *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += s * o.v_[n];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a.grid(), Boundary::free);
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t n = 0; n < ov.size(); ++n) ov[n] = av[n] * bv[n];
  return out;
}

ScalarField apply_dirichlet(ScalarField f) {
  f.zero_walls();
  return f;
}

double inner(const ScalarField& a, const ScalarField& b) {
  const Grid& g = a.grid();
  require_same_grid(g, b.grid());
  double total = 0.0;
  for (int j = 0; j < g.n2(); ++j) {
    auto ra = a.row(j);
    auto rb = b.row(j);
    double s = 0.0;
    for (int i = 0; i < g.n1(); ++i) s += ra[i] * rb[i];
    total += g.weight2(j) * s;
  }
  return total * g.dx1();
}

double integral(const ScalarField& f) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.n2(); ++j) {
    double s = 0.0;
    for (double x : f.row(j)) s += x;
    total += g.weight2(j) * s;
  }
  return total * g.dx1();
}

double mean(const ScalarField& f) { return integral(f) / Grid::kLength1; }

State::State(const Grid& grid)
    : u1(grid), u2(grid), T(grid), q(grid), p(grid, Boundary::free) {}

double inner_product_H(const State& a, const State& b) {
  require_same_grid(a.grid(), b.grid());
  return inner(a.u1, b.u1) + inner(a.u2, b.u2) + inner(a.T, b.T) + inner(a.q, b.q);
}

double norm_H_sq(const State& s) { return inner_product_H(s, s); }

bool boundary_rows_zero(const State& s) noexcept {
  return s.u1.walls_are_zero() && s.u2.walls_are_zero() && s.T.walls_are_zero() &&
         s.q.walls_are_zero();
}

std::string first_nonfinite_field(const State& s) {
  if (!s.u1.all_finite()) return "u1";
  if (!s.u2.all_finite()) return "u2";
  if (!s.T.all_finite()) return "T";
  if (!s.q.all_finite()) return "q";
  if (!s.p.all_finite()) return "p";
  return {};
}

}  // namespace atmocirc
