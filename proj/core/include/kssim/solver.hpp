#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "kssim/diagnostics.hpp"
#include "kssim/grid.hpp"
#include "kssim/model.hpp"

namespace kssim {

struct State {
  double t = 0.0;
  ScalarField u;
  ScalarField v;

  State(double time, ScalarField cells, ScalarField signal)
      : t(time), u(std::move(cells)), v(std::move(signal)) {}
};

enum class Scheme { IMEX, FullyExplicit };

std::string_view to_string(Scheme s);

struct SolverConfig {
  Scheme scheme = Scheme::IMEX;
  double cfl = 0.5;
  double dt_max = 1e-3;
  double t_end = 1.0;
  double sample_every = 0.01;
  double linear_tol = 1e-12;
  /// Spacing of stored full states; 0 stores only the initial and final state.
  double snapshot_every = 0.0;
  DiagnosticsSpec diagnostics;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

enum class RunStatus { Completed, BlowUpSuspected };

std::string_view to_string(RunStatus s);

/// Time-ordered record of one run. Rows start at t = 0 and are strictly increasing.
struct Trajectory {
  ModelParams params;
  Grid grid;
  SolverConfig config;
  double t1 = 0.0;
  double ubar = 0.0;  ///< mean of u0
  std::vector<DiagnosticsRow> rows;
  std::vector<State> snapshots;
  State initial;
  State final_state;
  RunStatus status = RunStatus::Completed;
  std::size_t steps = 0;
};

/// Largest admissible step: min(dt_max, cfl h / (2n max|w|)), and additionally
/// cfl h² / (4n) for the fully explicit scheme. h is the smallest spacing.
double stable_dt(const State& state, const ModelParams& params, const Grid& grid, const SolverConfig& cfg);

/// One Lie-split step of the regularised system: donor-cell advection of u with the
/// drift velocity, backward-Euler Neumann diffusion of u, then
/// (1 + dt − dtΔ) v⁺ = v + dt (u⁺)^θ. 2D implicit solves are dimension split.
/// Throws CflViolation when dt exceeds the cfl = 1 advective limit.
State step_imex(const State& state, const ModelParams& params, const Grid& grid, double dt,
                double linear_tol = 1e-12);

/// Forward Euler on the same spatial operators; used for cross-checking.
/// Positivity needs the summed advective and diffusive outflow below one, which
/// stable_dt guarantees for cfl ≤ 2/3.
State step_explicit(const State& state, const ModelParams& params, const Grid& grid, double dt);

/// Integrates from (u0, v0) to cfg.t_end with dt = stable_dt, recording a row every
/// cfg.sample_every. Runs whose ‖u‖_∞ exceeds 1e6 times its initial value stop early
/// with status BlowUpSuspected.
Trajectory run(const ScalarField& u0, const ScalarField& v0, const ModelParams& params, const Grid& grid,
               const SolverConfig& cfg, double t1);

}  // namespace kssim
