#include "kssim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <regex>

#include "json.hpp"
#include "kssim/errors.hpp"
#include "kssim/initial_data.hpp"
#include "kssim/io.hpp"
#include "kssim/parallel.hpp"

namespace kssim {

namespace {

using json = nlohmann::ordered_json;

struct RunPlan {
  std::string label;
  ModelParams params;
  Grid grid;
  SolverConfig solver;
  double mass;
};

std::string fmt(double x) { return io::format_double(x); }

std::vector<RunPlan> plan_runs(const ExperimentConfig& cfg) {
  const Grid grid = cfg.grid();
  std::vector<RunPlan> plans;
  auto add = [&](std::string label, ModelParams p, Grid g, SolverConfig s, double mass) {
    plans.push_back({std::move(label), p, std::move(g), std::move(s), mass});
  };
  switch (cfg.kind) {
    case ExperimentKind::Single:
      add("single", cfg.params, grid, cfg.solver, cfg.init.mass);
      break;
    case ExperimentKind::MassSweep:
    case ExperimentKind::VariationStability:
      for (double m : cfg.masses) add("m=" + fmt(m), cfg.params, grid, cfg.solver, m);
      break;
    case ExperimentKind::RegimeAtlas:
      for (double theta : cfg.theta_values) {
        for (double p : cfg.p_values) {
          ModelParams mp = cfg.params;
          mp.p = p;
          mp.theta = theta;
          add("p=" + fmt(p) + ",theta=" + fmt(theta), mp, grid, cfg.solver, cfg.init.mass);
        }
      }
      break;
    case ExperimentKind::EpsilonStudy:
      for (double eps : cfg.epsilons) {
        ModelParams mp = cfg.params;
        mp.epsilon = eps;
        add("epsilon=" + fmt(eps), mp, grid, cfg.solver, cfg.init.mass);
      }
      break;
    case ExperimentKind::RefinementStudy: {
      std::vector<int> cells = cfg.cells;
      SolverConfig s = cfg.solver;
      for (int level = 0; level < cfg.levels; ++level) {
        s.snapshot_every = s.dt_max;
        add("level=" + std::to_string(level), cfg.params, build_grid(cfg.dim, cfg.lengths, cells), s, cfg.init.mass);
        for (int& n : cells) n *= 2;
        s.dt_max /= 4.0;
      }
      break;
    }
  }
  return plans;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(io::format_double(x)); }

}  // namespace

std::pair<ScalarField, ScalarField> initial_state(const ExperimentConfig& cfg, const Grid& grid,
                                                  const ModelParams& params, double mass) {
  InitSpec spec = cfg.init;
  spec.mass = mass;
  ScalarField u0 = make_initial_u(grid, spec);
  if (cfg.kind == ExperimentKind::VariationStability) {
    for (double& x : u0.values) x += cfg.base;
  }
  ScalarField v0 = make_initial_v(u0, params.theta);
  return {std::move(u0), std::move(v0)};
}

TestFunction default_test_function(const Grid& grid, double t_end) {
  return TestFunction(1.0, {{0.5, {3, grid.dim() == 2 ? 3 : 0}}}, 0.0, 0.75 * t_end);
}

bool ExperimentResult::any_failed() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.failed; });
}

std::string ExperimentResult::summary_json() const {
  json j;
  j["config"] = to_text(config);
  j["kind"] = std::string(to_string(config.kind));
  j["runs"] = json::array();
  for (const auto& r : runs) {
    json e;
    e["index"] = r.index;
    e["label"] = r.label;
    e["params"] = {{"chi", r.params.chi}, {"p", r.params.p}, {"theta", r.params.theta}, {"epsilon", r.params.epsilon}};
    e["mass"] = r.mass;
    e["cells"] = r.cells;
    e["dt_max"] = r.dt_max;
    e["regime"] = {{"tag", std::string(to_string(r.regime.tag))}, {"threshold", number(r.regime.threshold)}};
    if (r.failed) {
      e["status"] = "Failed";
      e["error"] = r.error;
      j["runs"].push_back(std::move(e));
      continue;
    }
    e["status"] = std::string(to_string(r.status));
    e["mass_drift"] = number(r.mass_drift);
    e["gap_sup"] = number(r.gap_sup);
    e["boundedness"] = std::string(to_string(r.boundedness));
    e["gradv"] = json::array();
    for (std::size_t k = 0; k < r.gradv_sup.size(); ++k) {
      e["gradv"].push_back({{"q", number(r.gradv_sup[k].first)},
                            {"sup_after_t_floor", number(r.gradv_sup[k].second)},
                            {"final", number(r.gradv_final[k].second)}});
    }
    e["final_time"] = r.final_time;
    e["steps"] = r.steps;
    if (r.variation_l1) {
      e["variation_l1"] = number(*r.variation_l1);
      e["contained"] = *r.contained;
    }
    if (r.residual) {
      e["residual_u"] = number(r.residual->residual_u);
      e["residual_v"] = number(r.residual->residual_v);
    }
    e["csv"] = r.csv_file;
    j["runs"].push_back(std::move(e));
  }
  if (fit) {
    json pts = json::array();
    for (const auto& [m, gap] : fit->points) pts.push_back({m, gap});
    json res = json::array();
    for (double x : fit->residuals) res.push_back(number(x));
    j["fit"] = {{"points", pts},
                {"slope", number(fit->slope)},
                {"intercept", number(fit->intercept)},
                {"predicted_exponent", fit->predicted_exponent},
                {"residuals", res}};
  }
  if (!gradv_spreads.empty()) {
    j["gradv_bound"] = json::array();
    for (const auto& s : gradv_spreads) {
      json e = {{"q", number(s.q)}, {"refused", s.refused}};
      if (!s.refused) e["spread"] = number(s.spread);
      j["gradv_bound"].push_back(std::move(e));
    }
  }
  if (continuation) {
    json d = json::array();
    for (double x : continuation->differences) d.push_back(number(x));
    j["continuation"] = {
        {"epsilons", continuation->epsilons}, {"differences", d}, {"non_increasing", continuation->non_increasing}};
  }
  if (!refinement_ratios.empty()) {
    j["refinement"] = json::array();
    for (const auto& [ru, rv] : refinement_ratios) j["refinement"].push_back({{"ratio_u", number(ru)}, {"ratio_v", number(rv)}});
  }
  j["manifest"] = json::array();
  for (const auto& [file, hash] : manifest) j["manifest"].push_back({{"file", file}, {"sha256", hash}});
  return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs, bool persist) {
  const std::vector<RunPlan> plans = plan_runs(cfg);
  const std::size_t n = plans.size();

  ExperimentResult result;
  result.config = cfg;
  result.runs.resize(n);
  std::vector<std::optional<Trajectory>> trajectories(n);
  std::vector<std::string> csv(n);

  parallel_for(n, jobs, [&](std::size_t i) {
    const RunPlan& plan = plans[i];
    RunSummary& s = result.runs[i];
    s.index = i;
    s.label = plan.label;
    s.params = plan.params;
    s.mass = plan.mass;
    s.cells = plan.grid.nx();
    s.dt_max = plan.solver.dt_max;
    s.regime = classify_regime(plan.params.p, plan.params.theta, plan.grid.dim());
    const auto start = std::chrono::steady_clock::now();
    try {
      auto [u0, v0] = initial_state(cfg, plan.grid, plan.params, plan.mass);
      Trajectory traj = run(u0, v0, plan.params, plan.grid, plan.solver, cfg.t1);

      s.status = traj.status;
      s.mass_drift = mass_drift(traj);
      s.gap_sup = traj.rows.back().t > cfg.t1 ? gap_series(traj, cfg.t1).supremum : kInfinity;
      s.boundedness = boundedness_check(traj);
      for (double q : plan.solver.diagnostics.q_list) {
        double sup = 0.0;
        for (const auto& row : traj.rows) {
          if (row.t >= cfg.t_floor) sup = std::max(sup, row.gradv_norm(q));
        }
        s.gradv_sup.emplace_back(q, sup);
        s.gradv_final.emplace_back(q, traj.rows.back().gradv_norm(q));
      }
      s.final_time = traj.final_state.t;
      s.steps = traj.steps;

      if (cfg.kind == ExperimentKind::VariationStability) {
        ScalarField bump = traj.initial.u;
        for (double& x : bump.values) x -= cfg.base;
        s.variation_l1 = lp_norm(bump, 1.0);
        s.contained = s.gap_sup <= *s.variation_l1;
      }
      if (cfg.kind == ExperimentKind::RefinementStudy) {
        s.residual = weak_residual(traj, default_test_function(plan.grid, plan.solver.t_end), plan.params);
        traj.snapshots.clear();
      }
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu.csv", i);
      s.csv_file = name;
      csv[i] = io::trajectory_csv(traj.rows, plan.solver.diagnostics);
      trajectories[i] = std::move(traj);
    } catch (const Error& e) {
      s.failed = true;
      s.error = e.what();
    }
    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  const bool all_ok = !result.any_failed();
  if (cfg.kind == ExperimentKind::MassSweep && all_ok) {
    std::vector<std::pair<double, double>> points;
    std::vector<const Trajectory*> runs;
    for (std::size_t i = 0; i < n; ++i) {
      points.emplace_back(result.runs[i].mass, result.runs[i].gap_sup);
      runs.push_back(&*trajectories[i]);
    }
    try {
      BoundFit fit = fit_power_law(points);
      fit.predicted_exponent = predicted_gap_exponent(cfg.params.p, cfg.params.theta);
      result.fit = std::move(fit);
    } catch (const InvalidArgument&) {
      // Degenerate gaps (e.g. constant initial data) leave the fit absent.
    }
    const QSup sup = admissible_q_sup(cfg.params.theta, cfg.dim);
    for (double q : cfg.solver.diagnostics.q_list) {
      if (!sup.admits(q)) {
        result.gradv_spreads.push_back({q, true, 0.0});
      } else {
        result.gradv_spreads.push_back({q, false, check_gradv_bound(runs, q, cfg.params.theta, cfg.t_floor)});
      }
    }
  }
  if (cfg.kind == ExperimentKind::EpsilonStudy && all_ok) {
    std::vector<const Trajectory*> runs;
    for (const auto& t : trajectories) runs.push_back(&*t);
    result.continuation = epsilon_continuation(runs);
  }
  if (cfg.kind == ExperimentKind::RefinementStudy && all_ok) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const WeakResidual& a = *result.runs[i].residual;
      const WeakResidual& b = *result.runs[i + 1].residual;
      result.refinement_ratios.emplace_back(a.residual_u / b.residual_u, a.residual_v / b.residual_v);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!result.runs[i].failed) result.manifest.emplace_back(result.runs[i].csv_file, io::sha256_hex(csv[i]));
  }

  if (persist) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    const std::regex ours(R"(run_\d+\.csv)");
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (!std::regex_match(name, ours)) continue;
      const bool listed = std::any_of(result.manifest.begin(), result.manifest.end(),
                                      [&](const auto& m) { return m.first == name; });
      if (!listed) fs::remove(entry.path());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!result.runs[i].failed) io::write_file(dir / result.runs[i].csv_file, csv[i]);
    }
    io::write_file(dir / "summary.json", result.summary_json());
  }
  return result;
}

}  // namespace kssim
