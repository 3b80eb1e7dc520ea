#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kssim/analysis.hpp"
#include "kssim/config.hpp"
#include "kssim/solver.hpp"

namespace kssim {

/// Outcome of one simulation inside an experiment.
struct RunSummary {
  std::size_t index = 0;
  std::string label;  ///< e.g. "m=0.05" or "p=2.5,theta=1"
  ModelParams params;
  double mass = 0.0;
  int cells = 0;  ///< cells along x (differs between refinement levels)
  double dt_max = 0.0;
  Regime regime{RegimeTag::Subcritical, kInfinity};

  bool failed = false;
  std::string error;  ///< set when failed
  RunStatus status = RunStatus::Completed;
  double mass_drift = 0.0;
  double gap_sup = 0.0;  ///< sup of ‖u − ū‖_∞ over sampled t ≥ t1
  Boundedness boundedness = Boundedness::Bounded;
  std::vector<std::pair<double, double>> gradv_sup;    ///< (q, sup_{t ≥ t_floor} ‖∇v‖_q)
  std::vector<std::pair<double, double>> gradv_final;  ///< (q, ‖∇v‖_q at the last row)
  double final_time = 0.0;
  std::size_t steps = 0;
  double wall_seconds = 0.0;  ///< reported on the console, never persisted
  std::string csv_file;

  /// variation-stability: ‖u0 − M‖_{L¹} and whether gap_sup stays below it.
  std::optional<double> variation_l1;
  std::optional<bool> contained;
  /// refinement-study
  std::optional<WeakResidual> residual;
};

struct GradvSpread {
  double q;
  bool refused;
  double spread;  ///< max R / min R; unset (0) when refused
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunSummary> runs;
  std::optional<BoundFit> fit;
  std::vector<GradvSpread> gradv_spreads;
  std::optional<ContinuationReport> continuation;
  std::vector<std::pair<double, double>> refinement_ratios;  ///< per level pair: (ratio_u, ratio_v)
  std::vector<std::pair<std::string, std::string>> manifest;  ///< (file, sha256)

  bool any_failed() const;
  /// The summary JSON exactly as persisted.
  std::string summary_json() const;
};

/// Runs every simulation the config describes on up to `jobs` worker threads,
/// derives the kind-specific analysis and returns the results. Numerical results do
/// not depend on `jobs`. When `persist` is set, per-run CSVs and summary.json are
/// written to cfg.output_dir (created if absent); failed runs are recorded in the
/// summary instead of aborting the experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = 0, bool persist = true);

/// Initial (u0, v0) of run `mass` for the config's shape; for variation-stability
/// the bump sits on top of the base level M.
std::pair<ScalarField, ScalarField> initial_state(const ExperimentConfig& cfg, const Grid& grid,
                                                  const ModelParams& params, double mass);

/// Default test function of refinement studies: (1 + ½ Π cos(3π x_a / L_a)) with a
/// taper vanishing from 0.75 t_end. The residual of the upwind scheme is first order
/// in h and in dt; on the single-bump families the third mode gives both parts the
/// same sign, the first mode lets them cancel and the refinement ratio stalls.
TestFunction default_test_function(const Grid& grid, double t_end);

}  // namespace kssim
