#include "kssim/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kssim/errors.hpp"
#include "kssim/model.hpp"

namespace kssim {

std::string_view to_string(InitType t) {
  switch (t) {
    case InitType::Constant: return "constant";
    case InitType::CosineBump: return "cosine-bump";
    case InitType::GaussianBump: return "gaussian-bump";
    case InitType::RandomSmooth: return "random-smooth";
  }
  return "?";
}

InitType parse_init_type(std::string_view name) {
  for (InitType t : {InitType::Constant, InitType::CosineBump, InitType::GaussianBump, InitType::RandomSmooth}) {
    if (name == to_string(t)) return t;
  }
  throw InvalidArgument("unknown initial-data type '" + std::string(name) + "'");
}

namespace {

void rescale_to_mass(ScalarField& u, double mass) {
  const double current = integrate(u);
  if (!(current > 0.0)) throw InvalidArgument("initial profile has no mass");
  const double s = mass / current;
  for (double& x : u.values) x *= s;
}

}  // namespace

ScalarField make_initial_u(const Grid& g, const InitSpec& spec) {
  if (!(spec.mass > 0.0)) throw InvalidArgument("initial mass must be positive");
  const double ubar = spec.mass / g.measure();
  ScalarField u(g, ubar);
  const double pi = std::numbers::pi;

  switch (spec.type) {
    case InitType::Constant:
      return u;

    case InitType::CosineBump: {
      if (!(spec.amplitude >= 0.0 && spec.amplitude <= 1.0)) {
        throw InvalidArgument("cosine-bump amplitude must lie in [0, 1]");
      }
      for (int j = 0; j < g.ny(); ++j) {
        const double cy = g.dim() == 2 ? std::cos(pi * g.center(1, j) / g.length(1)) : 1.0;
        for (int i = 0; i < g.nx(); ++i) {
          u.at(i, j) = ubar * (1.0 + spec.amplitude * std::cos(pi * g.center(0, i) / g.length(0)) * cy);
        }
      }
      break;
    }

    case InitType::GaussianBump: {
      if (!(spec.width > 0.0)) throw InvalidArgument("gaussian-bump width must be positive");
      const double inv = 1.0 / (2.0 * spec.width * spec.width);
      for (int j = 0; j < g.ny(); ++j) {
        const double dy = g.dim() == 2 ? g.center(1, j) - 0.5 * g.length(1) : 0.0;
        for (int i = 0; i < g.nx(); ++i) {
          const double dx = g.center(0, i) - 0.5 * g.length(0);
          u.at(i, j) = std::exp(-(dx * dx + dy * dy) * inv);
        }
      }
      break;
    }

    case InitType::RandomSmooth: {
      if (spec.modes < 1) throw InvalidArgument("random-smooth needs at least one mode");
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> coeff(-1.0, 1.0);
      const int ky_max = g.dim() == 2 ? spec.modes : 0;
      std::vector<double> s(g.cell_count(), 0.0);
      for (int ky = 0; ky <= ky_max; ++ky) {
        for (int kx = 0; kx <= spec.modes; ++kx) {
          if (kx == 0 && ky == 0) continue;
          const double c = coeff(rng) / (1.0 + kx * kx + ky * ky);
          for (int j = 0; j < g.ny(); ++j) {
            const double cy = g.dim() == 2 ? std::cos(pi * ky * g.center(1, j) / g.length(1)) : 1.0;
            for (int i = 0; i < g.nx(); ++i) {
              s[g.cell_index(i, j)] += c * std::cos(pi * kx * g.center(0, i) / g.length(0)) * cy;
            }
          }
        }
      }
      double smax = 0.0;
      for (double x : s) smax = std::max(smax, std::abs(x));
      for (std::size_t k = 0; k < s.size(); ++k) u[k] = 1.0 + (smax > 0.0 ? 0.5 * s[k] / smax : 0.0);
      break;
    }
  }
  rescale_to_mass(u, spec.mass);
  return u;
}

ScalarField make_initial_v(const ScalarField& u0, double theta) { return production_rate(u0, theta); }

}  // namespace kssim
