#include "kssim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kssim/errors.hpp"
#include "kssim/tridiagonal.hpp"

namespace kssim {

std::string_view to_string(Scheme s) { return s == Scheme::IMEX ? "imex" : "explicit"; }

std::string_view to_string(RunStatus s) {
  return s == RunStatus::Completed ? "Completed" : "BlowUpSuspected";
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidArgument("cfl must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw InvalidArgument("dt_max must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be > 0");
  if (!(sample_every > 0.0)) throw InvalidArgument("sample_every must be > 0");
  if (!(linear_tol > 0.0)) throw InvalidArgument("linear_tol must be > 0");
  if (!(snapshot_every >= 0.0)) throw InvalidArgument("snapshot_every must be >= 0");
}

namespace {

void check_finite(const ScalarField& f, const char* name) {
  for (double x : f.values) {
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite value in ") + name);
  }
}

/// Donor-cell face flux u_upwind * w for every interior face.
VectorField upwind_flux(const ScalarField& u, const VectorField& w) {
  const Grid& g = u.grid;
  VectorField F(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 1; i < g.nx(); ++i) {
      const double wf = w.x(i, j);
      F.x(i, j) = wf * (wf > 0.0 ? u.at(i - 1, j) : u.at(i, j));
    }
  }
  if (g.dim() == 2) {
    for (int j = 1; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const double wf = w.y(i, j);
        F.y(i, j) = wf * (wf > 0.0 ? u.at(i, j - 1) : u.at(i, j));
      }
    }
  }
  return F;
}

/// Rebuilds a solved line as x_i = (b_i + f_{i+1/2} − f_{i−1/2}) / shift with face
/// fluxes f = r (x_{i+1} − x_i). The change is at round-off level, but the update
/// now telescopes, so unit-shift solves conserve the line sum without the small
/// bias of the elimination.
void flux_form(std::span<double> x, std::span<const double> b, double r, double shift, std::vector<double>& f) {
  const std::size_t n = x.size();
  f.assign(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) f[i] = r * (x[i] - x[i - 1]);
  for (std::size_t i = 0; i < n; ++i) x[i] = (b[i] + (f[i + 1] - f[i])) / shift;
}

/// Solves (shift I − dt Δ_h) x = b in place; in 2D as the product of an x sweep with
/// diagonal shift and a y sweep with unit shift.
void implicit_neumann_solve(ScalarField& b, double dt, double shift, double tol) {
  const Grid& g = b.grid;
  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<double> rhs;
  std::vector<double> flux;
  const double rx = dt / (g.spacing(0) * g.spacing(0));
  const NeumannTridiagonal tx(nx, rx, shift);
  for (int j = 0; j < ny; ++j) {
    const std::span<double> row = std::span<double>(b.values).subspan(g.cell_index(0, j), nx);
    rhs.assign(row.begin(), row.end());
    tx.solve(row, tol);
    flux_form(row, rhs, rx, shift, flux);
  }
  if (g.dim() == 1) return;

  const double ry = dt / (g.spacing(1) * g.spacing(1));
  const NeumannTridiagonal ty(ny, ry, 1.0);
  std::vector<double> column(ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) column[j] = b.at(i, j);
    rhs = column;
    ty.solve(column, tol);
    flux_form(column, rhs, ry, 1.0, flux);
    for (int j = 0; j < ny; ++j) b.at(i, j) = column[j];
  }
}

double advective_limit(double maxw, const Grid& grid) {
  if (maxw == 0.0) return kInfinity;
  return grid.min_spacing() / (2.0 * grid.dim() * maxw);
}

double diffusive_limit(const Grid& grid) {
  const double h = grid.min_spacing();
  return h * h / (4.0 * grid.dim());
}

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive and finite");
}

[[noreturn]] void throw_cfl(const char* which, double dt, double limit) {
  std::ostringstream msg;
  msg << which << " CFL violated: dt = " << dt << " exceeds " << limit;
  throw CflViolation(msg.str());
}

}  // namespace

double stable_dt(const State& state, const ModelParams& params, const Grid& grid, const SolverConfig& cfg) {
  const VectorField w = drift_velocity(gradient_faces(state.v), params);
  double dt = std::min(cfg.dt_max, cfg.cfl * advective_limit(w.max_abs(), grid));
  if (cfg.scheme == Scheme::FullyExplicit) dt = std::min(dt, cfg.cfl * diffusive_limit(grid));
  return dt;
}

State step_imex(const State& state, const ModelParams& params, const Grid& grid, double dt, double linear_tol) {
  check_dt(dt);
  const VectorField w = drift_velocity(gradient_faces(state.v), params);
  const double maxw = w.max_abs();
  const double limit = advective_limit(maxw, grid);
  if (dt > limit * (1.0 + 1e-12)) throw_cfl("advective", dt, limit);

  ScalarField u = state.u;
  if (maxw > 0.0) {
    const ScalarField div = divergence_cells(upwind_flux(state.u, w));
    for (std::size_t k = 0; k < u.size(); ++k) u[k] -= dt * div[k];
  }
  implicit_neumann_solve(u, dt, 1.0, linear_tol);

  const ScalarField source = production_rate(u, params.theta);
  ScalarField v = state.v;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += dt * source[k];
  implicit_neumann_solve(v, dt, 1.0 + dt, linear_tol);

  check_finite(u, "u");
  check_finite(v, "v");
  return State(state.t + dt, std::move(u), std::move(v));
}

State step_explicit(const State& state, const ModelParams& params, const Grid& grid, double dt) {
  check_dt(dt);
  const VectorField w = drift_velocity(gradient_faces(state.v), params);
  const double maxw = w.max_abs();
  const double alimit = advective_limit(maxw, grid);
  if (dt > alimit * (1.0 + 1e-12)) throw_cfl("advective", dt, alimit);
  const double dlimit = diffusive_limit(grid);
  if (dt > dlimit * (1.0 + 1e-12)) throw_cfl("diffusive", dt, dlimit);

  const ScalarField lap_u = laplacian(state.u);
  const ScalarField div = divergence_cells(upwind_flux(state.u, w));
  const ScalarField lap_v = laplacian(state.v);
  const ScalarField source = production_rate(state.u, params.theta);

  ScalarField u = state.u;
  ScalarField v = state.v;
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] += dt * (lap_u[k] - div[k]);
    v[k] += dt * (lap_v[k] - state.v[k] + source[k]);
  }
  check_finite(u, "u");
  check_finite(v, "v");
  return State(state.t + dt, std::move(u), std::move(v));
}

namespace {

void check_initial(const ScalarField& u0, const ScalarField& v0, const Grid& grid) {
  if (!(u0.grid == grid) || !(v0.grid == grid)) throw InvalidArgument("initial data live on a different grid");
  check_finite(u0, "u0");
  check_finite(v0, "v0");
  if (min_value(u0) < 0.0) throw InvalidArgument("u0 must be nonnegative");
  if (max_value(u0) <= 0.0) throw InvalidArgument("u0 must not vanish identically");
  if (min_value(v0) < 0.0) throw InvalidArgument("v0 must be nonnegative");
}

/// Event clock that lands exactly on multiples of `every` (or never, for every = 0).
class EventClock {
 public:
  EventClock(double every, double t_end) : every_(every), t_end_(t_end) {}

  double next() const {
    if (every_ <= 0.0) return t_end_;
    const double t = static_cast<double>(k_ + 1) * every_;
    return t >= t_end_ * (1.0 - 1e-12) ? t_end_ : t;
  }
  void advance() { ++k_; }

 private:
  double every_;
  double t_end_;
  long long k_ = 0;
};

}  // namespace

Trajectory run(const ScalarField& u0, const ScalarField& v0, const ModelParams& params, const Grid& grid,
               const SolverConfig& cfg, double t1) {
  params.validate(/*allow_decoupled=*/true);
  cfg.validate();
  check_initial(u0, v0, grid);
  if (!(t1 >= 0.0 && t1 < cfg.t_end)) throw InvalidArgument("t1 must lie in [0, t_end)");

  const double ubar = integrate(u0) / grid.measure();
  Trajectory traj{params, grid, cfg, t1, ubar, {}, {}, State(0.0, u0, v0), State(0.0, u0, v0)};
  traj.rows.push_back(compute_diagnostics(0.0, u0, v0, ubar, cfg.diagnostics));
  traj.rows.back().post_transient = t1 <= 0.0;
  traj.snapshots.push_back(traj.initial);

  const double blowup_level = 1e6 * lp_norm(u0, kInfinity);
  EventClock samples(cfg.sample_every, cfg.t_end);
  EventClock snapshots(cfg.snapshot_every, cfg.t_end);
  State state(0.0, u0, v0);

  while (state.t < cfg.t_end) {
    const double target = std::min(samples.next(), snapshots.next());
    double dt = stable_dt(state, params, grid, cfg);
    bool landed = false;
    if (state.t + dt >= target - 1e-14 * std::max(1.0, target)) {
      dt = target - state.t;
      landed = true;
    }
    state = cfg.scheme == Scheme::IMEX ? step_imex(state, params, grid, dt, cfg.linear_tol)
                                       : step_explicit(state, params, grid, dt);
    if (landed) state.t = target;
    ++traj.steps;

    const bool blown = lp_norm(state.u, kInfinity) > blowup_level;
    const bool at_sample = landed && target == samples.next();
    const bool at_snapshot = landed && target == snapshots.next();
    if (at_sample || blown || state.t >= cfg.t_end) {
      traj.rows.push_back(compute_diagnostics(state.t, state.u, state.v, ubar, cfg.diagnostics));
      traj.rows.back().post_transient = state.t >= t1;
    }
    if (at_snapshot && cfg.snapshot_every > 0.0 && state.t < cfg.t_end) traj.snapshots.push_back(state);
    if (at_sample) samples.advance();
    if (at_snapshot) snapshots.advance();
    if (blown) {
      traj.status = RunStatus::BlowUpSuspected;
      break;
    }
  }
  traj.snapshots.push_back(state);
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace kssim
