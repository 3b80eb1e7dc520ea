#include "kssim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kssim/errors.hpp"
#include "kssim/model.hpp"

namespace kssim {

namespace {

double lookup(const std::vector<std::pair<double, double>>& table, double key, const char* what) {
  for (const auto& [k, value] : table) {
    if (k == key) return value;
  }
  throw InvalidArgument(std::string(what) + " of order " + std::to_string(key) + " was not sampled");
}

}  // namespace

double DiagnosticsRow::gradv_norm(double q) const { return lookup(gradv_q_norms, q, "gradv norm"); }

double DiagnosticsRow::u_norm(double r) const { return lookup(u_r_norms, r, "u norm"); }

DiagnosticsRow compute_diagnostics(double t, const ScalarField& u, const ScalarField& v, double ubar,
                                   const DiagnosticsSpec& spec) {
  DiagnosticsRow row;
  row.t = t;
  row.mass = integrate(u);
  double gap = 0.0;
  double umax = 0.0;
  for (double x : u.values) {
    gap = std::max(gap, std::abs(x - ubar));
    umax = std::max(umax, std::abs(x));
  }
  row.linf_gap = gap;
  row.u_linf = umax;
  row.min_u = min_value(u);
  row.min_v = min_value(v);
  if (!spec.q_list.empty()) {
    const ScalarField gmag = gradient_magnitude_cells(gradient_faces(v));
    for (double q : spec.q_list) row.gradv_q_norms.emplace_back(q, lp_norm(gmag, q));
  }
  for (double r : spec.r_list) row.u_r_norms.emplace_back(r, lp_norm(u, r));
  return row;
}

}  // namespace kssim
