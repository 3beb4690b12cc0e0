#include "atmocirc/operators.hpp"

#include <cmath>

namespace atmocirc {

DifferentialOperators::DifferentialOperators(const Grid& grid, OperatorConfig config)
    : grid_(grid), config_(config), fft_(std::make_unique<FourierX1>(grid)) {
  const int m = fft_->modes();
  const int nyquist = grid.n1() / 2;
  const double h = grid.dx1();
  d1_symbol_.resize(m);
  d11_symbol_.resize(m);
  for (int k = 0; k < m; ++k) {
    if (config.x1_method == X1Method::fourier_spectral) {
      d1_symbol_[k] = (k == nyquist) ? 0.0 : double(k);
      d11_symbol_[k] = -double(k) * k;
    } else {
      d1_symbol_[k] = (k == 0 || k == nyquist) ? 0.0 : std::sin(k * h) / h;
      const double s = std::sin(0.5 * k * h);
      d11_symbol_[k] = -4.0 * s * s / (h * h);
    }
  }
}

ScalarField DifferentialOperators::apply_symbol(const ScalarField& f,
                                                const std::vector<double>& symbol,
                                                bool imaginary) const {
  Spectrum s = fft_->forward(f);
  for (int j = 0; j < s.rows(); ++j) {
    for (int k = 0; k < s.modes(); ++k) {
      const std::complex<double> c = s(k, j);
      s(k, j) = imaginary ? std::complex<double>(-c.imag(), c.real()) * symbol[k] : c * symbol[k];
    }
  }
  return fft_->inverse(s, Boundary::free);
}

ScalarField DifferentialOperators::d1(const ScalarField& f) const {
  return apply_symbol(f, d1_symbol_, true);
}

ScalarField DifferentialOperators::d11(const ScalarField& f) const {
  return apply_symbol(f, d11_symbol_, false);
}

ScalarField DifferentialOperators::d2(const ScalarField& f) const {
  require_same_grid(grid_, f.grid());
  const int n1 = grid_.n1();
  const int last = grid_.n2() - 1;
  const double inv2h = 0.5 / grid_.dx2();
  ScalarField out(grid_, Boundary::free);
  for (int i = 0; i < n1; ++i) {
    out(i, 0) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * inv2h;
    out(i, last) = (3.0 * f(i, last) - 4.0 * f(i, last - 1) + f(i, last - 2)) * inv2h;
  }
  for (int j = 1; j < last; ++j)
    for (int i = 0; i < n1; ++i) out(i, j) = (f(i, j + 1) - f(i, j - 1)) * inv2h;
  return out;
}

std::pair<ScalarField, ScalarField> DifferentialOperators::gradient(const ScalarField& f) const {
  return {d1(f), d2(f)};
}

ScalarField DifferentialOperators::divergence(const ScalarField& u1, const ScalarField& u2) const {
  require_same_grid(grid_, u2.grid());
  ScalarField out = d1(u1);
  const int n1 = grid_.n1();
  const int last = grid_.n2() - 1;
  const double invh = 1.0 / grid_.dx2();
  for (int i = 0; i < n1; ++i) {
    out(i, 0) += (u2(i, 1) - u2(i, 0)) * invh;
    out(i, last) += (u2(i, last) - u2(i, last - 1)) * invh;
  }
  for (int j = 1; j < last; ++j)
    for (int i = 0; i < n1; ++i) out(i, j) += (u2(i, j + 1) - u2(i, j - 1)) * 0.5 * invh;
  return out;
}

ScalarField DifferentialOperators::laplacian(const ScalarField& f) const {
  ScalarField out = d11(f);
  const int n1 = grid_.n1();
  const int last = grid_.n2() - 1;
  const double invh2 = 1.0 / (grid_.dx2() * grid_.dx2());
  for (int j = 1; j < last; ++j)
    for (int i = 0; i < n1; ++i)
      out(i, j) += (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) * invh2;
  if (last >= 3) {
    for (int i = 0; i < n1; ++i) {
      out(i, 0) += (2.0 * f(i, 0) - 5.0 * f(i, 1) + 4.0 * f(i, 2) - f(i, 3)) * invh2;
      out(i, last) += (2.0 * f(i, last) - 5.0 * f(i, last - 1) + 4.0 * f(i, last - 2) -
                       f(i, last - 3)) * invh2;
    }
  } else {
    for (int i = 0; i < n1; ++i) {
      const double c = (f(i, 0) - 2.0 * f(i, 1) + f(i, 2)) * invh2;
      out(i, 0) += c;
      out(i, last) += c;
    }
  }
  return out;
}

ScalarField DifferentialOperators::advect(const ScalarField& u1, const ScalarField& u2,
                                          const ScalarField& f) const {
  require_same_grid(grid_, u1.grid());
  require_same_grid(grid_, u2.grid());
  require_same_grid(grid_, f.grid());
  auto [f1, f2] = gradient(f);
  ScalarField out = product(u1, f1);
  out += product(u2, f2);
  if (config_.advection_form == AdvectionForm::skew) {
    out += divergence(product(u1, f), product(u2, f));
    out *= 0.5;
  }
  return out;
}

double DifferentialOperators::dirichlet_form(const ScalarField& f, const ScalarField& g) const {
  require_same_grid(grid_, f.grid());
  require_same_grid(grid_, g.grid());
  const double along_x1 = -inner(d11(f), g);
  const int n1 = grid_.n1();
  const double h = grid_.dx2();
  double along_x2 = 0.0;
  for (int j = 0; j + 1 < grid_.n2(); ++j) {
    double s = 0.0;
    for (int i = 0; i < n1; ++i) s += (f(i, j + 1) - f(i, j)) * (g(i, j + 1) - g(i, j));
    along_x2 += s;
  }
  along_x2 *= grid_.dx1() / h;
  return along_x1 + along_x2;
}

double velocity_h1_seminorm_sq(const DifferentialOperators& ops, const State& s) {
  return ops.dirichlet_form(s.u1, s.u1) + ops.dirichlet_form(s.u2, s.u2);
}

double h1_seminorm_sq(const DifferentialOperators& ops, const State& s) {
  return velocity_h1_seminorm_sq(ops, s) + ops.dirichlet_form(s.T, s.T) +
         ops.dirichlet_form(s.q, s.q);
}

}  // namespace atmocirc
