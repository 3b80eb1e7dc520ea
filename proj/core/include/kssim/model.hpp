#pragma once

#include <limits>
#include <string_view>

#include "kssim/grid.hpp"

namespace kssim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Parameters of the regularised flux-limited system
///   u_t = Δu − χ ∇·(u (|∇v|² + ε)^{(p−2)/2} ∇v),   v_t = Δv − v + u^θ.
struct ModelParams {
  double chi = 1.0;
  double p = 2.0;
  double theta = 1.0;
  double epsilon = 0.0;

  /// Throws InvalidArgument unless χ > 0, p > 1, 0 < θ ≤ 1, 0 ≤ ε < 1 and ε > 0
  /// whenever p < 2.
  ///
  /// χ = 0 is accepted when `allow_decoupled` is set; it switches off the drift and
  /// is used for the heat-flow validation runs.
  void validate(bool allow_decoupled = false) const;

  bool operator==(const ModelParams&) const = default;
};

enum class RegimeTag { Subcritical, Supercritical };

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag;
  double threshold;  ///< critical p; +inf when θ ≤ 1/n
};

/// Stability region in (p, θ): any p when nθ ≤ 1, otherwise p < nθ/(nθ − 1).
/// p equal to the threshold is Supercritical.
Regime classify_regime(double p, double theta, int n);

/// Supremum of the q-range on which ‖∇v‖_{L^q} is controlled.
struct QSup {
  double value;    ///< +inf or n/(nθ − 1)
  bool inclusive;  ///< whether `value` itself belongs to the range

  bool admits(double q) const { return q >= 1.0 && (inclusive ? q <= value : q < value); }
};

QSup admissible_q_sup(double theta, int n);

/// Facewise w = χ (|g|² + ε)^{(p−2)/2} g. In 2D the face |g|² is the squared normal
/// component plus the square of the mean of the four adjacent tangential face values.
/// Throws SingularDrift when p < 2, ε = 0 and an interior face has |g| = 0.
VectorField drift_velocity(const VectorField& gradv, const ModelParams& params);

/// Cellwise u^θ. Negative values down to −1e−12 ‖u‖_∞ are treated as zero; anything
/// more negative throws InvalidArgument.
ScalarField production_rate(const ScalarField& u, double theta);

/// Dominant small-mass exponent θ(p − 1) + 1 of the equilibrium-gap bound.
double predicted_gap_exponent(double p, double theta);

/// First nonzero Neumann eigenvalue of −Δ on the box: (π / max L)².
double neumann_lambda1(const Grid& grid);

}  // namespace kssim
