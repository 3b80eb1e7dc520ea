#pragma once

#include <span>
#include <vector>

namespace kssim {

/// Solver for the symmetric Neumann system
///   (shift + 2r) x_i − r x_{i−1} − r x_{i+1} = b_i,
/// with the diagonal reduced to shift + r in the two boundary rows. This is the
/// matrix of (shift·I − dt Δ_h) along one axis with r = dt/h². For shift ≥ 1 it is
/// a strictly diagonally dominant M-matrix, so the Thomas elimination needs no
/// pivoting and a nonnegative right-hand side gives a nonnegative solution.
///
/// The elimination coefficients are factored once and reused across solves.
class NeumannTridiagonal {
 public:
  NeumannTridiagonal(int n, double r, double shift);

  int size() const { return n_; }

  /// Solves in place. If `residual_tol` > 0 the backward error
  /// ‖Ax − b‖_∞ / (‖A‖_∞‖x‖_∞ + ‖b‖_∞) is checked afterwards and LinearSolveError
  /// thrown when it exceeds the tolerance.
  void solve(std::span<double> rhs_to_x, double residual_tol = 0.0) const;

 private:
  double diag(int i) const { return (i == 0 || i == n_ - 1) ? shift_ + r_ : shift_ + 2.0 * r_; }

  int n_;
  double r_;
  double shift_;
  std::vector<double> inv_pivot_;
  std::vector<double> c_star_;
  mutable std::vector<double> scratch_;
};

/// General Thomas algorithm for sub-diagonal a, diagonal b, super-diagonal c
/// (a[0] and c[n−1] ignored). Throws LinearSolveError on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d);

}  // namespace kssim
