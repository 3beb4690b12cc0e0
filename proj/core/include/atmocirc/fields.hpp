#pragma once

/// @file fields.hpp
/// @brief Collocated grid on the channel (0, 2pi) x (0, 1) and the fields living on it.
///
/// x1 is periodic with n1 nodes x1_i = i*dx1 (the node at 2pi is identified
/// with 0). x2 has n2 nodes x2_j = j*dx2 including both walls. Storage is
/// row-major with x1 fastest: index(i, j) = j*n1 + i.

#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace atmocirc {

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Grid {
 public:
  static constexpr double kLength1 = 2.0 * std::numbers::pi;

  /// Throws std::invalid_argument unless n1 is even and >= 4 and n2 >= 3.
  Grid(int n1, int n2);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  double dx1() const noexcept { return kLength1 / n1_; }
  double dx2() const noexcept { return 1.0 / (n2_ - 1); }
  double x1(int i) const noexcept { return i * dx1(); }
  double x2(int j) const noexcept { return j * dx2(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n1_) * n2_; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * n1_ + i;
  }
  bool is_wall(int j) const noexcept { return j == 0 || j == n2_ - 1; }

  /// Trapezoid weight in x2 (dx2/2 on the walls).
  double weight2(int j) const noexcept { return is_wall(j) ? 0.5 * dx2() : dx2(); }

  bool operator==(const Grid&) const = default;

 private:
  int n1_;
  int n2_;
};

void require_same_grid(const Grid& a, const Grid& b);

enum class Boundary { dirichlet_zero, free };

class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, Boundary bc = Boundary::dirichlet_zero);

  /// Samples f(x1, x2) at every node. Dirichlet fields get exact zeros on the walls.
  template <typename F>
  static ScalarField sample(const Grid& grid, F&& f, Boundary bc = Boundary::dirichlet_zero) {
    ScalarField out(grid, bc);
    for (int j = 0; j < grid.n2(); ++j)
      for (int i = 0; i < grid.n1(); ++i) out(i, j) = f(grid.x1(i), grid.x2(j));
    if (bc == Boundary::dirichlet_zero) out.zero_walls();
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  Boundary boundary() const noexcept { return bc_; }
  void set_boundary(Boundary bc) noexcept { bc_ = bc; }

  double& operator()(int i, int j) noexcept { return v_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return v_[grid_.index(i, j)]; }

  std::span<double> values() noexcept { return v_; }
  std::span<const double> values() const noexcept { return v_; }
  std::span<double> row(int j) noexcept {
    return std::span<double>(v_).subspan(grid_.index(0, j), grid_.n1());
  }
  std::span<const double> row(int j) const noexcept {
    return std::span<const double>(v_).subspan(grid_.index(0, j), grid_.n1());
  }

  void fill(double value);
  void zero_walls() noexcept;
  bool walls_are_zero() const noexcept;
  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s) noexcept;
  /// this += s * o
  ScalarField& axpy(double s, const ScalarField& o);

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  Boundary bc_;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product; the result is a free (non-Dirichlet) field.
ScalarField product(const ScalarField& a, const ScalarField& b);

/// Wall rows set to exactly zero, interior untouched.
ScalarField apply_dirichlet(ScalarField f);

/// Quadrature of a*b: rectangle rule in x1, trapezoid in x2.
double inner(const ScalarField& a, const ScalarField& b);
/// Quadrature of f.
double integral(const ScalarField& f);
/// Trapezoid-weighted mean of f over the channel.
double mean(const ScalarField& f);

struct State {
  explicit State(const Grid& grid);

  const Grid& grid() const noexcept { return u1.grid(); }
  bool operator==(const State&) const = default;

  ScalarField u1;
  ScalarField u2;
  ScalarField T;
  ScalarField q;
  ScalarField p;  // free on the walls, mean zero
  double time = 0.0;
};

/// (a, b)_H summed over u1, u2, T, q; pressure excluded.
double inner_product_H(const State& a, const State& b);
/// ||s||_H^2
double norm_H_sq(const State& s);

/// Dirichlet rows of u1, u2, T, q exactly zero.
bool boundary_rows_zero(const State& s) noexcept;
/// Name of the first field holding a non-finite value, empty if all finite.
std::string first_nonfinite_field(const State& s);

}  // namespace atmocirc
