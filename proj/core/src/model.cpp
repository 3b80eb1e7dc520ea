#include "kssim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kssim/errors.hpp"

namespace kssim {

namespace {

void check_p_theta(double p, double theta) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must lie in (1, inf)");
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in (0, 1]");
}

}  // namespace

void ModelParams::validate(bool allow_decoupled) const {
  if (!std::isfinite(chi) || chi < 0.0 || (chi == 0.0 && !allow_decoupled)) {
    throw InvalidArgument("chi must be > 0");
  }
  check_p_theta(p, theta);
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in [0, 1)");
  if (p < 2.0 && epsilon == 0.0) {
    throw InvalidArgument("p < 2 requires epsilon > 0 (the drift is singular where grad v = 0)");
  }
}

std::string_view to_string(RegimeTag tag) {
  return tag == RegimeTag::Subcritical ? "Subcritical" : "Supercritical";
}

Regime classify_regime(double p, double theta, int n) {
  check_p_theta(p, theta);
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  const double ntheta = n * theta;
  const double threshold = ntheta <= 1.0 ? kInfinity : ntheta / (ntheta - 1.0);
  return {p < threshold ? RegimeTag::Subcritical : RegimeTag::Supercritical, threshold};
}

QSup admissible_q_sup(double theta, int n) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in (0, 1]");
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  const double ntheta = n * theta;
  if (ntheta < 1.0) return {kInfinity, true};
  if (ntheta == 1.0) return {kInfinity, false};
  return {n / (ntheta - 1.0), false};
}

VectorField drift_velocity(const VectorField& gradv, const ModelParams& params) {
  const Grid& g = gradv.grid;
  VectorField w(g);
  const double chi = params.chi;
  const double eps = params.epsilon;
  const double half_exp = 0.5 * (params.p - 2.0);
  const bool linear = params.p == 2.0;
  const bool may_be_singular = params.p < 2.0 && eps == 0.0;

  auto factor = [&](double sq) {
    if (linear) return 1.0;
    if (may_be_singular && sq == 0.0) {
      throw SingularDrift("drift is singular: p < 2, epsilon = 0 and grad v vanishes on a face");
    }
    return std::pow(sq + eps, half_exp);
  };

  const int nx = g.nx();
  const int ny = g.ny();
  if (g.dim() == 1) {
    for (int i = 1; i < nx; ++i) {
      const double gx = gradv.x(i);
      w.x(i) = chi * factor(gx * gx) * gx;
    }
    return w;
  }

  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double gx = gradv.x(i, j);
      const double gt =
          0.25 * (gradv.y(i - 1, j) + gradv.y(i - 1, j + 1) + gradv.y(i, j) + gradv.y(i, j + 1));
      w.x(i, j) = chi * factor(gx * gx + gt * gt) * gx;
    }
  }
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double gy = gradv.y(i, j);
      const double gt =
          0.25 * (gradv.x(i, j - 1) + gradv.x(i + 1, j - 1) + gradv.x(i, j) + gradv.x(i + 1, j));
      w.y(i, j) = chi * factor(gy * gy + gt * gt) * gy;
    }
  }
  return w;
}

ScalarField production_rate(const ScalarField& u, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in (0, 1]");
  const double floor = -1e-12 * lp_norm(u, kInfinity);
  ScalarField out(u.grid);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k];
    if (x < floor) {
      std::ostringstream msg;
      msg << "production_rate: negative density " << x << " in cell " << k;
      throw InvalidArgument(msg.str());
    }
    if (x <= 0.0) {
      out[k] = 0.0;
    } else {
      out[k] = theta == 1.0 ? x : (theta == 0.5 ? std::sqrt(x) : std::pow(x, theta));
    }
  }
  return out;
}

double predicted_gap_exponent(double p, double theta) {
  check_p_theta(p, theta);
  return theta * (p - 1.0) + 1.0;
}

double neumann_lambda1(const Grid& grid) {
  double l = grid.length(0);
  if (grid.dim() == 2) l = std::max(l, grid.length(1));
  const double k = std::numbers::pi / l;
  return k * k;
}

}  // namespace kssim
