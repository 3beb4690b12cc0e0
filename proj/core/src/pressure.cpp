#include "atmocirc/pressure.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "atmocirc/parallel.hpp"
#include "atmocirc/tridiagonal.hpp"

namespace atmocirc {

void solve_tridiagonal(const Tridiagonal& a, std::span<double> rhs) {
  const std::size_t n = a.size();
  if (n == 0) return;
  std::vector<double> c(n, 0.0);
  double pivot = a.diag[0];
  if (pivot == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot at row 0");
  c[0] = n > 1 ? a.upper[0] / pivot : 0.0;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.lower[i] * c[i - 1];
    if (pivot == 0.0)
      throw std::runtime_error("tridiagonal solve: zero pivot at row " + std::to_string(i));
    c[i] = i + 1 < n ? a.upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - a.lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

namespace {

Tridiagonal neumann_system(const Grid& g, double lambda) {
  const int n = g.n2();
  const double invh2 = 1.0 / (g.dx2() * g.dx2());
  Tridiagonal a(n);
  for (int j = 0; j < n; ++j) {
    a.diag[j] = lambda - 2.0 * invh2;
    a.lower[j] = invh2;
    a.upper[j] = invh2;
  }
  a.upper[0] = 2.0 * invh2;
  a.lower[n - 1] = 2.0 * invh2;
  return a;
}

ScalarField remove_mean(ScalarField f) {
  const double m = mean(f);
  for (double& x : f.values()) x -= m;
  return f;
}

}  // namespace

PoissonSolver::PoissonSolver(std::shared_ptr<const DifferentialOperators> ops)
    : ops_(std::move(ops)) {}

ScalarField PoissonSolver::solve(const PoissonProblem& problem) const {
  const Grid& g = ops_->grid();
  require_same_grid(g, problem.rhs.grid());
  const ScalarField rhs = remove_mean(problem.rhs);
  Spectrum s = ops_->fourier().forward(rhs);
  const int n = g.n2();

  for (int k = 0; k < s.modes(); ++k) {
    const double lambda = ops_->d11_symbol(k);
    const bool singular = lambda == 0.0;
    if (singular && !problem.pin_mean)
      throw SingularModeError("poisson: mode " + std::to_string(k) +
                              " is singular under Neumann walls and requires pinning");
    Tridiagonal a = neumann_system(g, lambda);
    std::vector<double> re(n), im(n);
    for (int j = 0; j < n; ++j) {
      re[j] = s(k, j).real();
      im[j] = s(k, j).imag();
    }
    if (singular) {
      // Pin p_0 = 0 and drop row 0; compatibility makes row 0 redundant.
      Tridiagonal b(n - 1);
      for (int j = 1; j < n; ++j) {
        b.lower[j - 1] = a.lower[j];
        b.diag[j - 1] = a.diag[j];
        b.upper[j - 1] = a.upper[j];
      }
      solve_tridiagonal(b, std::span(re).subspan(1));
      solve_tridiagonal(b, std::span(im).subspan(1));
      re[0] = 0.0;
      im[0] = 0.0;
    } else {
      solve_tridiagonal(a, re);
      solve_tridiagonal(a, im);
    }
    for (int j = 0; j < n; ++j) s(k, j) = {re[j], im[j]};
  }
  return remove_mean(ops_->fourier().inverse(s, Boundary::free));
}

ScalarField PoissonSolver::apply(const ScalarField& p) const {
  const Grid& g = ops_->grid();
  ScalarField out = ops_->d11(p);
  const int last = g.n2() - 1;
  const double invh2 = 1.0 / (g.dx2() * g.dx2());
  for (int i = 0; i < g.n1(); ++i) {
    out(i, 0) += 2.0 * (p(i, 1) - p(i, 0)) * invh2;
    out(i, last) += 2.0 * (p(i, last - 1) - p(i, last)) * invh2;
    for (int j = 1; j < last; ++j) out(i, j) += (p(i, j + 1) - 2.0 * p(i, j) + p(i, j - 1)) * invh2;
  }
  return out;
}

ScalarField solve_poisson(const DifferentialOperators& ops, const PoissonProblem& problem) {
  // Non-owning alias; the solver does not outlive this call.
  std::shared_ptr<const DifferentialOperators> view(&ops, [](const DifferentialOperators*) {});
  return PoissonSolver(view).solve(problem);
}

namespace {

/// div_h grad_h on mode k for pressures on all n2 nodes, with the gradient
/// kept only on interior rows (wall velocities are fixed at zero).
Eigen::MatrixXd projection_operator(const Grid& g, double s) {
  const int n = g.n2();
  const int last = n - 1;
  const double h = g.dx2();
  // grad2: interior rows j = 1..last-1, centered.
  Eigen::MatrixXd grad2 = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < last; ++j) {
    grad2(j, j + 1) = 0.5 / h;
    grad2(j, j - 1) = -0.5 / h;
  }
  // div2 acting on a vertical velocity column.
  Eigen::MatrixXd div2 = Eigen::MatrixXd::Zero(n, n);
  div2(0, 1) = 1.0 / h;
  div2(0, 0) = -1.0 / h;
  div2(last, last) = 1.0 / h;
  div2(last, last - 1) = -1.0 / h;
  for (int j = 1; j < last; ++j) {
    div2(j, j + 1) = 0.5 / h;
    div2(j, j - 1) = -0.5 / h;
  }
  Eigen::MatrixXd m = div2 * grad2;
  for (int j = 1; j < last; ++j) m(j, j) -= s * s;
  return m;
}

}  // namespace

Projector::Projector(std::shared_ptr<const DifferentialOperators> ops) : ops_(std::move(ops)) {
  const Grid& g = ops_->grid();
  const int n = g.n2();
  const int modes = ops_->modes();
  pinv_.resize(modes);
  kernel_dim_.assign(modes, 0);
  for (int k = 0; k < modes; ++k) {
    const Eigen::MatrixXd m = projection_operator(g, ops_->d1_symbol(k));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * sv(0);
    Eigen::VectorXd inv_sv(n);
    for (int i = 0; i < n; ++i) {
      if (sv(i) > tol) {
        inv_sv(i) = 1.0 / sv(i);
      } else {
        inv_sv(i) = 0.0;
        ++kernel_dim_[k];
      }
    }
    const Eigen::MatrixXd pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
    pinv_[k].resize(std::size_t(n) * n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) pinv_[k][std::size_t(r) * n + c] = pinv(r, c);
  }
}

Projection Projector::project(const ScalarField& u1, const ScalarField& u2, double dt,
                              double Pr) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("project: dt must be > 0");
  if (!(Pr > 0.0) || !std::isfinite(Pr)) throw std::invalid_argument("project: Pr must be > 0");
  const Grid& g = ops_->grid();
  require_same_grid(g, u1.grid());
  require_same_grid(g, u2.grid());

  ScalarField v1 = apply_dirichlet(u1);
  ScalarField v2 = apply_dirichlet(u2);
  v1.set_boundary(Boundary::dirichlet_zero);
  v2.set_boundary(Boundary::dirichlet_zero);

  ScalarField rhs = ops_->divergence(v1, v2);
  rhs *= 1.0 / (dt * Pr);
  Spectrum s = ops_->fourier().forward(rhs);
  const int n = g.n2();

  parallel_for(s.modes(), [&](int begin, int end) {
    std::vector<std::complex<double>> col(n);
    for (int k = begin; k < end; ++k) {
      const std::vector<double>& p = pinv_[k];
      for (int j = 0; j < n; ++j) col[j] = s(k, j);
      for (int r = 0; r < n; ++r) {
        std::complex<double> acc = 0.0;
        const double* row = p.data() + std::size_t(r) * n;
        for (int c = 0; c < n; ++c) acc += row[c] * col[c];
        s(k, r) = acc;
      }
    }
  });

  ScalarField phi = ops_->fourier().inverse(s, Boundary::free);
  const double m = mean(phi);
  for (double& x : phi.values()) x -= m;

  auto [g1, g2] = ops_->gradient(phi);
  v1.axpy(-dt * Pr, g1);
  v2.axpy(-dt * Pr, g2);
  v1.zero_walls();
  v2.zero_walls();
  return {std::move(v1), std::move(v2), std::move(phi)};
}

}  // namespace atmocirc
