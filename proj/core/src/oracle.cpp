#include "kssim/oracle.hpp"

#include <cmath>
#include <numbers>

#include "kssim/errors.hpp"

namespace kssim::oracle {

namespace {

/// cos(k π (i + 1/2) / n), row-major in k.
std::vector<double> cosine_table(int n) {
  std::vector<double> table(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      table[static_cast<std::size_t>(k) * n + i] = std::cos(std::numbers::pi * k * (i + 0.5) / n);
    }
  }
  return table;
}

void analyse_line(const std::vector<double>& table, int n, const std::vector<double>& in, std::vector<double>& out) {
  for (int k = 0; k < n; ++k) {
    const double* row = table.data() + static_cast<std::size_t>(k) * n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += row[i] * in[i];
    out[k] = (k == 0 ? 1.0 : 2.0) * s / n;
  }
}

void synthesise_line(const std::vector<double>& table, int n, const std::vector<double>& in, std::vector<double>& out) {
  for (int i = 0; i < n; ++i) out[i] = 0.0;
  for (int k = 0; k < n; ++k) {
    const double c = in[k];
    if (c == 0.0) continue;
    const double* row = table.data() + static_cast<std::size_t>(k) * n;
    for (int i = 0; i < n; ++i) out[i] += c * row[i];
  }
}

template <typename LineOp>
std::vector<double> transform(const Grid& g, const std::vector<double>& data, LineOp op) {
  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<double> result(data);
  {
    const auto table = cosine_table(nx);
    std::vector<double> in(nx);
    std::vector<double> out(nx);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) in[i] = result[g.cell_index(i, j)];
      op(table, nx, in, out);
      for (int i = 0; i < nx; ++i) result[g.cell_index(i, j)] = out[i];
    }
  }
  if (g.dim() == 2) {
    const auto table = cosine_table(ny);
    std::vector<double> in(ny);
    std::vector<double> out(ny);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) in[j] = result[g.cell_index(i, j)];
      op(table, ny, in, out);
      for (int j = 0; j < ny; ++j) result[g.cell_index(i, j)] = out[j];
    }
  }
  return result;
}

/// ∫_0^1 e^{−z r} r dr and ∫_0^1 e^{−z r} (1 − r) dr for z ≥ 0.
void exponential_weights(double z, double& w_far, double& w_near) {
  if (z < 0.1) {
    double term = 1.0;  // (−z)^n / n!
    w_far = 0.0;
    w_near = 0.0;
    for (int n = 0; n < 16; ++n) {
      w_far += term / (n + 2);
      w_near += term / ((n + 1.0) * (n + 2.0));
      term *= -z / (n + 1);
    }
    return;
  }
  const double e = std::exp(-z);
  w_far = (-std::expm1(-z) - z * e) / (z * z);
  w_near = (z + std::expm1(-z)) / (z * z);
}

}  // namespace

CosineSpectrum to_spectrum(const ScalarField& f) {
  return {f.grid, transform(f.grid, f.values, analyse_line)};
}

ScalarField from_spectrum(const CosineSpectrum& s) {
  return ScalarField(s.grid, transform(s.grid, s.coefficients, synthesise_line));
}

double mode_eigenvalue(const Grid& grid, int kx, int ky) {
  const double ax = kx * std::numbers::pi / grid.length(0);
  double lambda = ax * ax;
  if (grid.dim() == 2) {
    const double ay = ky * std::numbers::pi / grid.length(1);
    lambda += ay * ay;
  }
  return lambda;
}

ScalarField heat_semigroup_apply(const ScalarField& f, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("heat semigroup time must be >= 0");
  if (t == 0.0) return f;
  CosineSpectrum s = to_spectrum(f);
  const Grid& g = f.grid;
  for (int ky = 0; ky < g.ny(); ++ky) {
    for (int kx = 0; kx < g.nx(); ++kx) s.at(kx, ky) *= std::exp(-t * mode_eigenvalue(g, kx, ky));
  }
  return from_spectrum(s);
}

ScalarField duhamel_linear_v(const ScalarField& v0, const std::vector<SourceSample>& samples, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("duhamel: t must be >= 0");
  if (samples.empty() || samples.front().t > 0.0 || samples.back().t < t) {
    throw InvalidArgument("duhamel: source samples do not cover [0, t]");
  }
  for (std::size_t j = 1; j < samples.size(); ++j) {
    if (!(samples[j].t > samples[j - 1].t)) throw InvalidArgument("duhamel: sample times must increase");
  }
  const Grid& g = v0.grid;
  CosineSpectrum result = to_spectrum(v0);
  std::vector<CosineSpectrum> spectra;
  spectra.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.g.grid == g)) throw InvalidArgument("duhamel: sample on a different grid");
    spectra.push_back(to_spectrum(s.g));
  }

  for (std::size_t k = 0; k < result.coefficients.size(); ++k) {
    const int kx = static_cast<int>(k % g.nx());
    const int ky = static_cast<int>(k / g.nx());
    const double a = 1.0 + mode_eigenvalue(g, kx, ky);
    double acc = std::exp(-a * t) * result.coefficients[k];
    for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
      const double s0 = samples[j].t;
      const double s1_full = samples[j + 1].t;
      if (s0 >= t) break;
      double g0 = spectra[j].coefficients[k];
      double g1 = spectra[j + 1].coefficients[k];
      double s1 = s1_full;
      if (s1_full > t) {
        g1 = g0 + (g1 - g0) * (t - s0) / (s1_full - s0);
        s1 = t;
      }
      const double h = s1 - s0;
      double w_far = 0.0;
      double w_near = 0.0;
      exponential_weights(a * h, w_far, w_near);
      acc += std::exp(-a * (t - s1)) * h * (g0 * w_far + g1 * w_near);
    }
    result.coefficients[k] = acc;
  }
  return from_spectrum(result);
}

}  // namespace kssim::oracle
