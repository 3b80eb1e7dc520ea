#include "kssim/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kssim/errors.hpp"

namespace kssim {

NeumannTridiagonal::NeumannTridiagonal(int n, double r, double shift)
    : n_(n), r_(r), shift_(shift), inv_pivot_(n), c_star_(n), scratch_(n) {
  if (n < 2) throw InvalidArgument("tridiagonal system needs at least 2 unknowns");
  if (!(r >= 0.0) || !(shift > 0.0)) throw InvalidArgument("tridiagonal system must be an M-matrix");
  double c_prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pivot = diag(i) + r * c_prev;  // sub-diagonal is −r
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
      throw LinearSolveError("zero pivot in row " + std::to_string(i));
    }
    inv_pivot_[i] = 1.0 / pivot;
    c_star_[i] = -r * inv_pivot_[i];
    c_prev = c_star_[i];
  }
}

void NeumannTridiagonal::solve(std::span<double> x, double residual_tol) const {
  if (static_cast<int>(x.size()) != n_) throw InvalidArgument("tridiagonal rhs has wrong length");
  if (residual_tol > 0.0) std::copy(x.begin(), x.end(), scratch_.begin());

  x[0] *= inv_pivot_[0];
  for (int i = 1; i < n_; ++i) x[i] = (x[i] + r_ * x[i - 1]) * inv_pivot_[i];
  for (int i = n_ - 2; i >= 0; --i) x[i] -= c_star_[i] * x[i + 1];

  if (residual_tol > 0.0) {
    double res = 0.0;
    double bnorm = 0.0;
    double xnorm = 0.0;
    for (int i = 0; i < n_; ++i) {
      double ax = diag(i) * x[i];
      if (i > 0) ax -= r_ * x[i - 1];
      if (i < n_ - 1) ax -= r_ * x[i + 1];
      res = std::max(res, std::abs(ax - scratch_[i]));
      bnorm = std::max(bnorm, std::abs(scratch_[i]));
      xnorm = std::max(xnorm, std::abs(x[i]));
    }
    // normwise backward error; ‖A‖_∞ = shift + 4r
    const double scale = (shift_ + 4.0 * r_) * xnorm + bnorm;
    if (!std::isfinite(res) || res > residual_tol * std::max(scale, 1e-300)) {
      throw LinearSolveError("tridiagonal residual " + std::to_string(res) + " exceeds tolerance");
    }
  }
}

std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n || n == 0) {
    throw InvalidArgument("tridiagonal bands must share a nonzero length");
  }
  std::vector<double> cs(n);
  std::vector<double> x(n);
  double m = b[0];
  if (m == 0.0) throw LinearSolveError("zero pivot in row 0");
  cs[0] = c[0] / m;
  x[0] = d[0] / m;
  for (std::size_t i = 1; i < n; ++i) {
    m = b[i] - a[i] * cs[i - 1];
    if (m == 0.0) throw LinearSolveError("zero pivot in row " + std::to_string(i));
    cs[i] = c[i] / m;
    x[i] = (d[i] - a[i] * x[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cs[i] * x[i + 1];
  return x;
}

}  // namespace kssim
