#pragma once

#include <vector>

#include "kssim/grid.hpp"

namespace kssim::oracle {

/// Coefficients of a cell-centred field in the Neumann cosine basis
/// Π_a cos(k_a π x_a / L_a), stored with the same x-fastest layout as the field
/// (coefficient (k_x, k_y) at k_x + nx k_y).
struct CosineSpectrum {
  Grid grid;
  std::vector<double> coefficients;

  double& at(int kx, int ky = 0) { return coefficients[grid.cell_index(kx, ky)]; }
  double at(int kx, int ky = 0) const { return coefficients[grid.cell_index(kx, ky)]; }
};

/// Analysis on midpoint-sampled cosines (a DCT-II per axis, orthogonal on cell centres).
CosineSpectrum to_spectrum(const ScalarField& f);

/// Synthesis, the exact inverse of to_spectrum up to round-off.
ScalarField from_spectrum(const CosineSpectrum& s);

/// Continuum eigenvalue Σ_a (k_a π / L_a)² of −Δ for mode (kx, ky).
double mode_eigenvalue(const Grid& grid, int kx, int ky = 0);

/// Exact Neumann heat flow e^{tΔ} f for the cosine interpolant of f.
/// Throws InvalidArgument for t < 0.
ScalarField heat_semigroup_apply(const ScalarField& f, double t);

struct SourceSample {
  double t;
  ScalarField g;
};

/// Variation-of-constants solution of v_t = Δv − v + g at time t:
///   v(t) = e^{−t} e^{tΔ} v0 + ∫_0^t e^{−(t−σ)} e^{(t−σ)Δ} g(σ) dσ,
/// with g interpolated linearly between samples and each mode integrated exactly.
/// Samples must be time-ordered and cover [0, t].
ScalarField duhamel_linear_v(const ScalarField& v0, const std::vector<SourceSample>& samples, double t);

}  // namespace kssim::oracle
