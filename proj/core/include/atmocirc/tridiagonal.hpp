#pragma once

#include <span>
#include <vector>

namespace atmocirc {

/// Tridiagonal system: lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas algorithm without pivoting. Solves in place on `rhs`. Throws
/// std::runtime_error on a zero pivot.
void solve_tridiagonal(const Tridiagonal& a, std::span<double> rhs);

}  // namespace atmocirc
