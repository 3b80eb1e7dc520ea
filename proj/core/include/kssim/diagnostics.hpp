#pragma once

#include <utility>
#include <vector>

#include "kssim/grid.hpp"

namespace kssim {

/// Norm orders sampled alongside every trajectory row.
struct DiagnosticsSpec {
  std::vector<double> q_list;  ///< orders of ‖∇v‖_{L^q}
  std::vector<double> r_list;  ///< orders of ‖u‖_{L^r}

  bool operator==(const DiagnosticsSpec&) const = default;
};

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;
  double linf_gap = 0.0;  ///< ‖u − ū‖_∞ with ū the initial mean
  double u_linf = 0.0;
  double min_u = 0.0;
  double min_v = 0.0;
  std::vector<std::pair<double, double>> gradv_q_norms;  ///< (q, ‖∇v‖_{L^q})
  std::vector<std::pair<double, double>> u_r_norms;      ///< (r, ‖u‖_{L^r})
  bool post_transient = false;                           ///< t ≥ t1

  /// Looks up ‖∇v‖_{L^q}; throws InvalidArgument when q was not sampled.
  double gradv_norm(double q) const;
  double u_norm(double r) const;
};

/// Evaluates every row quantity for (u, v) at time t; `ubar` is the initial mean.
DiagnosticsRow compute_diagnostics(double t, const ScalarField& u, const ScalarField& v, double ubar,
                                   const DiagnosticsSpec& spec);

}  // namespace kssim
