#include "kssim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kssim/errors.hpp"

namespace kssim {

double mass_drift(const std::vector<DiagnosticsRow>& rows) {
  if (rows.empty()) throw InvalidArgument("mass_drift: empty trajectory");
  const double m0 = rows.front().mass;
  if (!(m0 > 0.0)) throw InvalidArgument("mass_drift: initial mass must be positive");
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.mass - m0) / m0);
  return worst;
}

double mass_drift(const Trajectory& traj) { return mass_drift(traj.rows); }

GapSeries gap_series(const std::vector<DiagnosticsRow>& rows, double t1) {
  if (rows.empty()) throw InvalidArgument("gap_series: empty trajectory");
  if (t1 >= rows.back().t) throw InvalidArgument("gap_series: t1 must precede the end of the run");
  GapSeries out;
  for (const auto& r : rows) {
    if (r.t < t1) continue;
    out.t.push_back(r.t);
    out.gap.push_back(r.linf_gap);
    out.supremum = std::max(out.supremum, r.linf_gap);
  }
  return out;
}

GapSeries gap_series(const Trajectory& traj, double t1) { return gap_series(traj.rows, t1); }

BoundFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw InvalidArgument("fit_power_law: need at least 3 points");
  const double n = static_cast<double>(points.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [m, gap] : points) {
    if (!(m > 0.0) || !(gap > 0.0)) throw InvalidArgument("fit_power_law: coordinates must be positive");
    sx += std::log(m);
    sy += std::log(gap);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [m, gap] : points) {
    const double dx = std::log(m) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(gap) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_power_law: degenerate fit (all masses equal)");

  BoundFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [m, gap] : points) {
    fit.residuals.push_back(std::log(gap) - (fit.intercept + fit.slope * std::log(m)));
  }
  return fit;
}

double check_gradv_bound(const std::vector<const Trajectory*>& runs, double q, double theta, double t_floor) {
  if (runs.empty()) throw InvalidArgument("check_gradv_bound: no runs");
  const int n = runs.front()->grid.dim();
  const QSup sup = admissible_q_sup(theta, n);
  if (!sup.admits(q)) {
    std::ostringstream msg;
    msg << "check_gradv_bound: q = " << q << " is outside the admissible range (sup " << sup.value
        << (sup.inclusive ? ", inclusive)" : ", exclusive)");
    throw InvalidArgument(msg.str());
  }
  double rmin = kInfinity;
  double rmax = 0.0;
  for (const Trajectory* run : runs) {
    if (run->rows.empty()) throw InvalidArgument("check_gradv_bound: empty trajectory");
    const double mass = run->rows.front().mass;
    const double scale = std::pow(mass, theta);
    double r = 0.0;
    bool any = false;
    for (const auto& row : run->rows) {
      if (row.t < t_floor) continue;
      r = std::max(r, row.gradv_norm(q) / scale);
      any = true;
    }
    if (!any) throw InvalidArgument("check_gradv_bound: no samples after t_floor");
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rmax <= kGradvNoiseFloor) return 1.0;
  if (rmin <= kGradvNoiseFloor) return kInfinity;
  return rmax / rmin;
}

std::string_view to_string(Boundedness b) { return b == Boundedness::Bounded ? "Bounded" : "Growing"; }

Boundedness boundedness_check(const std::vector<DiagnosticsRow>& rows) {
  if (rows.empty()) throw InvalidArgument("boundedness_check: empty trajectory");
  const double half = 0.5 * rows.back().t;
  double early = 0.0;
  double late = 0.0;
  for (const auto& r : rows) {
    if (r.t <= half) early = std::max(early, r.u_linf);
    if (r.t >= half) late = std::max(late, r.u_linf);
  }
  return late <= 1.05 * early ? Boundedness::Bounded : Boundedness::Growing;
}

Boundedness boundedness_check(const Trajectory& traj) { return boundedness_check(traj.rows); }

TestFunction::TestFunction(double constant, std::vector<Mode> modes, double t_flat, double t_cut)
    : constant_(constant), modes_(std::move(modes)), t_flat_(t_flat), t_cut_(t_cut) {
  double total = 0.0;
  for (const auto& m : modes_) {
    if (m.k[0] < 0 || m.k[1] < 0) throw InvalidArgument("test function: mode indices must be >= 0");
    total += std::abs(m.coefficient);
  }
  if (constant_ < total) throw InvalidArgument("test function may turn negative");
  if (!(t_flat_ >= 0.0 && t_cut_ > t_flat_)) throw InvalidArgument("test function taper needs 0 <= t_flat < t_cut");
}

double TestFunction::taper(double t) const {
  if (t <= t_flat_) return 1.0;
  if (t >= t_cut_) return 0.0;
  const double s = (t - t_flat_) / (t_cut_ - t_flat_);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double TestFunction::taper_rate(double t) const {
  if (t <= t_flat_ || t >= t_cut_) return 0.0;
  const double s = (t - t_flat_) / (t_cut_ - t_flat_);
  const double one_minus = 1.0 - s;
  return -30.0 * s * s * one_minus * one_minus / (t_cut_ - t_flat_);
}

namespace {

double wavenumber(const Grid& g, int axis, int k) { return k * std::numbers::pi / g.length(axis); }

}  // namespace

ScalarField TestFunction::spatial(const Grid& g) const {
  ScalarField out(g, constant_);
  for (const auto& m : modes_) {
    const double ax = wavenumber(g, 0, m.k[0]);
    const double ay = g.dim() == 2 ? wavenumber(g, 1, m.k[1]) : 0.0;
    for (int j = 0; j < g.ny(); ++j) {
      const double cy = g.dim() == 2 ? std::cos(ay * g.center(1, j)) : 1.0;
      for (int i = 0; i < g.nx(); ++i) out.at(i, j) += m.coefficient * std::cos(ax * g.center(0, i)) * cy;
    }
  }
  return out;
}

ScalarField TestFunction::spatial_laplacian(const Grid& g) const {
  ScalarField out(g, 0.0);
  for (const auto& m : modes_) {
    const double ax = wavenumber(g, 0, m.k[0]);
    const double ay = g.dim() == 2 ? wavenumber(g, 1, m.k[1]) : 0.0;
    const double lambda = ax * ax + ay * ay;
    for (int j = 0; j < g.ny(); ++j) {
      const double cy = g.dim() == 2 ? std::cos(ay * g.center(1, j)) : 1.0;
      for (int i = 0; i < g.nx(); ++i) {
        out.at(i, j) -= lambda * m.coefficient * std::cos(ax * g.center(0, i)) * cy;
      }
    }
  }
  return out;
}

VectorField TestFunction::spatial_gradient(const Grid& g) const {
  VectorField out(g);
  for (const auto& m : modes_) {
    const double ax = wavenumber(g, 0, m.k[0]);
    const double ay = g.dim() == 2 ? wavenumber(g, 1, m.k[1]) : 0.0;
    for (int j = 0; j < g.ny(); ++j) {
      const double cy = g.dim() == 2 ? std::cos(ay * g.center(1, j)) : 1.0;
      for (int i = 1; i < g.nx(); ++i) {
        out.x(i, j) -= m.coefficient * ax * std::sin(ax * i * g.spacing(0)) * cy;
      }
    }
    if (g.dim() == 2) {
      for (int j = 1; j < g.ny(); ++j) {
        const double sy = std::sin(ay * j * g.spacing(1));
        for (int i = 0; i < g.nx(); ++i) {
          out.y(i, j) -= m.coefficient * ay * std::cos(ax * g.center(0, i)) * sy;
        }
      }
    }
  }
  return out;
}

namespace {

/// Σ over interior faces of a_f b_f times the cell volume.
double face_inner(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    for (std::size_t k = 0; k < a.faces[axis].size(); ++k) s += a.faces[axis][k] * b.faces[axis][k];
  }
  return s * a.grid.cell_volume();
}

/// Σ over interior faces of (u_L + u_R)/2 w_f b_f times the cell volume.
double face_transport(const ScalarField& u, const VectorField& w, const VectorField& b) {
  const Grid& g = u.grid;
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 1; i < g.nx(); ++i) s += 0.5 * (u.at(i - 1, j) + u.at(i, j)) * w.x(i, j) * b.x(i, j);
  }
  if (g.dim() == 2) {
    for (int j = 1; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) s += 0.5 * (u.at(i, j - 1) + u.at(i, j)) * w.y(i, j) * b.y(i, j);
    }
  }
  return s * g.cell_volume();
}

}  // namespace

namespace {

/// ∫ f(t) dt over [a, b] by 4-point Gauss–Legendre, exact for degree ≤ 7.
template <class F>
double gauss4(F&& f, double a, double b) {
  static constexpr double x[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static constexpr double w[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += w[k] * f(mid + half * x[k]);
  return half * s;
}

/// Weights A_j = ∫ η ℓ_j and B_j = ∫ η' ℓ_j for the hat functions ℓ_j on the snapshot
/// times, so Σ_j A_j f(t_j) integrates the piecewise-linear interpolant of f against η
/// exactly (η is a piecewise quintic; intervals are split at its breakpoints).
void taper_weights(const TestFunction& phi, const std::vector<State>& snaps,
                   std::vector<double>& A, std::vector<double>& B) {
  A.assign(snaps.size(), 0.0);
  B.assign(snaps.size(), 0.0);
  for (std::size_t j = 0; j + 1 < snaps.size(); ++j) {
    const double t0 = snaps[j].t;
    const double t1 = snaps[j + 1].t;
    const double dt = t1 - t0;
    std::vector<double> cuts{t0};
    for (double c : {phi.t_flat(), phi.t_cut()}) {
      if (c > t0 && c < t1) cuts.push_back(c);
    }
    cuts.push_back(t1);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c];
      const double b = cuts[c + 1];
      A[j] += gauss4([&](double t) { return phi.taper(t) * (t1 - t) / dt; }, a, b);
      A[j + 1] += gauss4([&](double t) { return phi.taper(t) * (t - t0) / dt; }, a, b);
      B[j] += gauss4([&](double t) { return phi.taper_rate(t) * (t1 - t) / dt; }, a, b);
      B[j + 1] += gauss4([&](double t) { return phi.taper_rate(t) * (t - t0) / dt; }, a, b);
    }
  }
}

}  // namespace

WeakResidual weak_residual(const Trajectory& traj, const TestFunction& phi, const ModelParams& params) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 3) throw InvalidArgument("weak_residual: need at least three snapshots");
  if (phi.t_cut() >= snaps.back().t) {
    throw InvalidArgument("weak_residual: test function support must end before the last snapshot");
  }
  const Grid& g = traj.grid;
  const ScalarField S = phi.spatial(g);
  const ScalarField LS = phi.spatial_laplacian(g);
  const VectorField GS = phi.spatial_gradient(g);

  // Time integrals of: u φ_t, u Δφ, u w·∇φ, v φ_t, ∇v·∇φ, v φ, u^θ φ.
  double iu_t = 0.0, iu_lap = 0.0, iu_drift = 0.0;
  double iv_t = 0.0, iv_grad = 0.0, iv_decay = 0.0, iv_src = 0.0;
  std::vector<double> A;
  std::vector<double> B;
  taper_weights(phi, snaps, A, B);
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    const double eta = A[j];
    const double eta_t = B[j];
    if (eta == 0.0 && eta_t == 0.0) continue;

    const ScalarField& u = snaps[j].u;
    const ScalarField& v = snaps[j].v;
    const VectorField gv = gradient_faces(v);
    const VectorField w = drift_velocity(gv, params);
    const ScalarField src = production_rate(u, params.theta);

    const double us = inner_product(u, S);
    const double vs = inner_product(v, S);
    iu_t += eta_t * us;
    iu_lap += eta * inner_product(u, LS);
    iu_drift += eta * face_transport(u, w, GS);
    iv_t += eta_t * vs;
    iv_grad += eta * face_inner(gv, GS);
    iv_decay += eta * vs;
    iv_src += eta * inner_product(src, S);
  }
  const double eta0 = phi.taper(traj.initial.t);
  const double u0s = eta0 * inner_product(traj.initial.u, S);
  const double v0s = eta0 * inner_product(traj.initial.v, S);

  const double lhs_u = -iu_t - u0s;
  const double rhs_u = iu_lap + iu_drift;
  const double scale_u = std::abs(iu_t) + std::abs(u0s) + std::abs(iu_lap) + std::abs(iu_drift);
  const double lhs_v = -iv_t - v0s;
  const double rhs_v = -iv_grad - iv_decay + iv_src;
  const double scale_v =
      std::abs(iv_t) + std::abs(v0s) + std::abs(iv_grad) + std::abs(iv_decay) + std::abs(iv_src);

  WeakResidual r;
  r.residual_u = scale_u > 0.0 ? std::abs(lhs_u - rhs_u) / scale_u : 0.0;
  r.residual_v = scale_v > 0.0 ? std::abs(lhs_v - rhs_v) / scale_v : 0.0;
  return r;
}

ContinuationReport epsilon_continuation(const std::vector<const Trajectory*>& runs) {
  if (runs.size() < 2) throw InvalidArgument("epsilon_continuation: need at least two runs");
  const Trajectory& ref = *runs.front();
  ContinuationReport report;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Trajectory& r = *runs[k];
    ModelParams a = r.params;
    a.epsilon = ref.params.epsilon;
    if (!(a == ref.params) || !(r.grid == ref.grid) || !(r.config == ref.config) ||
        !(r.initial.u == ref.initial.u) || !(r.initial.v == ref.initial.v) ||
        r.final_state.t != ref.final_state.t) {
      throw InvalidArgument("epsilon_continuation: runs differ in more than epsilon");
    }
    if (k > 0 && !(r.params.epsilon < runs[k - 1]->params.epsilon)) {
      throw InvalidArgument("epsilon_continuation: epsilon must be strictly decreasing");
    }
    report.epsilons.push_back(r.params.epsilon);
  }
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const auto& a = runs[k]->final_state.u.values;
    const auto& b = runs[k + 1]->final_state.u.values;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    report.differences.push_back(d);
  }
  report.non_increasing = true;
  for (std::size_t k = 0; k + 1 < report.differences.size(); ++k) {
    if (report.differences[k + 1] > 1.1 * report.differences[k]) report.non_increasing = false;
  }
  return report;
}

}  // namespace kssim
