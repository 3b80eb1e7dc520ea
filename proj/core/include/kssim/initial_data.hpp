#pragma once

#include <cstdint>
#include <string_view>

#include "kssim/grid.hpp"

namespace kssim {

enum class InitType { Constant, CosineBump, GaussianBump, RandomSmooth };

std::string_view to_string(InitType t);
/// Parses "constant", "cosine-bump", "gaussian-bump" or "random-smooth".
InitType parse_init_type(std::string_view name);

/// Shape of the initial cell density. Every shape is rescaled to the target mass.
struct InitSpec {
  InitType type = InitType::CosineBump;
  double mass = 1.0;
  double amplitude = 0.5;  ///< cosine-bump δ ∈ [0, 1]
  double width = 0.1;      ///< gaussian-bump standard deviation
  int modes = 4;           ///< random-smooth: highest cosine index per axis
  std::uint64_t seed = 1;

  bool operator==(const InitSpec&) const = default;
};

/// Nonnegative u0 with integrate(u0) equal to spec.mass (to round-off).
///   constant       ū
///   cosine-bump    ū (1 + δ Π_a cos(π x_a / L_a))
///   gaussian-bump  exp(−|x − centre|² / (2 width²)), rescaled
///   random-smooth  1 + ½ s(x) / max|s| with s a random cosine series, rescaled
ScalarField make_initial_u(const Grid& grid, const InitSpec& spec);

/// Signal in local balance with the cells: v0 = u0^θ.
ScalarField make_initial_v(const ScalarField& u0, double theta);

}  // namespace kssim
