#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "kssim/grid.hpp"
#include "kssim/model.hpp"
#include "kssim/solver.hpp"

namespace kssim {

/// max_t |mass(t) − mass(0)| / mass(0). Throws InvalidArgument on an empty trajectory.
double mass_drift(const Trajectory& traj);
double mass_drift(const std::vector<DiagnosticsRow>& rows);

struct GapSeries {
  std::vector<double> t;
  std::vector<double> gap;
  double supremum = 0.0;
};

/// The ‖u − ū‖_∞ column restricted to sampled rows with t ≥ t1.
GapSeries gap_series(const Trajectory& traj, double t1);
GapSeries gap_series(const std::vector<DiagnosticsRow>& rows, double t1);

struct BoundFit {
  std::vector<std::pair<double, double>> points;  ///< (m, gap)
  double slope = 0.0;
  double intercept = 0.0;  ///< log C
  double predicted_exponent = 0.0;
  std::vector<double> residuals;  ///< log gap − fitted line, per point
};

/// Least-squares line through (log m, log gap). `predicted_exponent` is left at 0;
/// callers that know (p, θ) fill it from predicted_gap_exponent.
BoundFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// R values at or below this are round-off on a flat signal and count as zero.
inline constexpr double kGradvNoiseFloor = 1e-12;

/// Spread max R / min R of R(m) = sup_{t ≥ t_floor} ‖∇v‖_{L^q}(t) / m^θ across runs
/// of one shape at different masses. q outside admissible_q_sup(θ, n) is refused
/// with InvalidArgument. All R = 0 (up to kGradvNoiseFloor) reports a spread of 1.
double check_gradv_bound(const std::vector<const Trajectory*>& runs, double q, double theta, double t_floor);

enum class Boundedness { Bounded, Growing };

std::string_view to_string(Boundedness b);

/// Bounded when max u_linf over t ∈ [T/2, T] is at most 1.05 times the max over [0, T/2].
Boundedness boundedness_check(const Trajectory& traj);
Boundedness boundedness_check(const std::vector<DiagnosticsRow>& rows);

/// Nonnegative test function φ(x, t) = S(x) η(t) with
///   S(x) = c0 + Σ c_k Π_a cos(k_a π x_a / L_a)
/// and η a C² quintic taper equal to 1 on [0, t_flat] and 0 from t_cut on.
class TestFunction {
 public:
  struct Mode {
    double coefficient;
    std::array<int, 2> k;
  };

  /// Throws InvalidArgument if S could turn negative (c0 < Σ|c_k|) or the taper is
  /// not 0 ≤ t_flat < t_cut.
  TestFunction(double constant, std::vector<Mode> modes, double t_flat, double t_cut);

  double t_flat() const { return t_flat_; }
  double t_cut() const { return t_cut_; }

  double taper(double t) const;
  double taper_rate(double t) const;

  /// S at cell centres, ΔS at cell centres, and the face-normal derivative of S at
  /// the face centres (boundary faces vanish by construction).
  ScalarField spatial(const Grid& g) const;
  ScalarField spatial_laplacian(const Grid& g) const;
  VectorField spatial_gradient(const Grid& g) const;

 private:
  double constant_;
  std::vector<Mode> modes_;
  double t_flat_;
  double t_cut_;
};

struct WeakResidual {
  double residual_u;
  double residual_v;
};

/// Residuals of the two weak identities tested against φ, evaluated on the stored
/// snapshots with midpoint quadrature in space. In time the solution is interpolated
/// linearly between snapshots (the trapezoid rule) and integrated exactly against η.
/// Each residual is |LHS − RHS| divided by the sum of the magnitudes of the
/// individual integrals. Throws InvalidArgument if φ's support reaches the final
/// snapshot time or fewer than three snapshots are stored.
WeakResidual weak_residual(const Trajectory& traj, const TestFunction& phi, const ModelParams& params);

struct ContinuationReport {
  std::vector<double> epsilons;
  std::vector<double> differences;  ///< d_k = ‖u_{ε_k} − u_{ε_{k+1}}‖_∞ at t_end
  bool non_increasing = false;      ///< d_{k+1} ≤ 1.1 d_k for every k
};

/// Successive final-state differences along a strictly decreasing ε sequence. The
/// runs must agree in everything except ε.
ContinuationReport epsilon_continuation(const std::vector<const Trajectory*>& runs);

}  // namespace kssim
