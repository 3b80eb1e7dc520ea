#include "kssim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kssim/errors.hpp"

namespace kssim {

Grid build_grid(int dim, std::span<const double> lengths, std::span<const int> cells) {
  if (dim != 1 && dim != 2) {
    throw InvalidArgument("dimension out of range: " + std::to_string(dim) + " (expected 1 or 2)");
  }
  if (lengths.size() != static_cast<std::size_t>(dim) || cells.size() != static_cast<std::size_t>(dim)) {
    throw InvalidArgument("grid needs exactly one length and one cell count per axis");
  }
  Grid g;
  g.dim_ = dim;
  g.cell_volume_ = 1.0;
  g.measure_ = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw InvalidArgument("non-positive length on axis " + std::to_string(a));
    }
    if (cells[a] < 4) {
      throw InvalidArgument("too few cells on axis " + std::to_string(a) + " (need at least 4)");
    }
    g.lengths_[a] = lengths[a];
    g.cells_[a] = cells[a];
    g.spacing_[a] = lengths[a] / cells[a];
    g.cell_volume_ *= g.spacing_[a];
    g.measure_ *= lengths[a];
  }
  return g;
}

std::size_t Grid::face_count(int axis) const {
  if (axis == 0) return static_cast<std::size_t>(cells_[0] + 1) * cells_[1];
  if (dim_ < 2) return 0;
  return static_cast<std::size_t>(cells_[0]) * (cells_[1] + 1);
}

double Grid::min_spacing() const {
  return dim_ == 1 ? spacing_[0] : std::min(spacing_[0], spacing_[1]);
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.cell_count()) {
    throw InvalidArgument("field size " + std::to_string(values.size()) + " does not match cell count " +
                          std::to_string(grid.cell_count()));
  }
}

VectorField::VectorField(const Grid& g) : grid(g) {
  faces[0].assign(g.face_count(0), 0.0);
  faces[1].assign(g.face_count(1), 0.0);
}

bool VectorField::boundary_is_zero() const {
  const int nx = grid.nx();
  const int ny = grid.ny();
  for (int j = 0; j < ny; ++j) {
    if (x(0, j) != 0.0 || x(nx, j) != 0.0) return false;
  }
  if (grid.dim() == 2) {
    for (int i = 0; i < nx; ++i) {
      if (y(i, 0) != 0.0 || y(i, ny) != 0.0) return false;
    }
  }
  return true;
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& axis : faces) {
    for (double w : axis) m = std::max(m, std::abs(w));
  }
  return m;
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double x : f.values) sum += x;
  return f.grid.cell_volume() * sum;
}

double lp_norm(const ScalarField& f, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("lp_norm: q must be >= 1");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  if (q == 1.0) {
    for (double x : f.values) sum += std::abs(x);
    return f.grid.cell_volume() * sum;
  }
  if (q == 2.0) {
    for (double x : f.values) sum += x * x;
    return std::sqrt(f.grid.cell_volume() * sum);
  }
  for (double x : f.values) sum += std::pow(std::abs(x), q);
  return std::pow(f.grid.cell_volume() * sum, 1.0 / q);
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * g[k];
  return f.grid.cell_volume() * sum;
}

double max_value(const ScalarField& f) {
  return f.values.empty() ? 0.0 : *std::max_element(f.values.begin(), f.values.end());
}

double min_value(const ScalarField& f) {
  return f.values.empty() ? 0.0 : *std::min_element(f.values.begin(), f.values.end());
}

VectorField gradient_faces(const ScalarField& f) {
  const Grid& g = f.grid;
  VectorField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) out.x(i, j) = (f.at(i, j) - f.at(i - 1, j)) * inv_hx;
  }
  if (g.dim() == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) out.y(i, j) = (f.at(i, j) - f.at(i, j - 1)) * inv_hy;
    }
  }
  return out;
}

ScalarField divergence_cells(const VectorField& F) {
  const Grid& g = F.grid;
  ScalarField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out.at(i, j) = (F.x(i + 1, j) - F.x(i, j)) * inv_hx;
  }
  if (g.dim() == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) out.at(i, j) += (F.y(i, j + 1) - F.y(i, j)) * inv_hy;
    }
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) { return divergence_cells(gradient_faces(f)); }

ScalarField gradient_magnitude_cells(const VectorField& grad) {
  const Grid& g = grad.grid;
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double gx = 0.5 * (grad.x(i, j) + grad.x(i + 1, j));
      double sq = gx * gx;
      if (g.dim() == 2) {
        const double gy = 0.5 * (grad.y(i, j) + grad.y(i, j + 1));
        sq += gy * gy;
      }
      out.at(i, j) = std::sqrt(sq);
    }
  }
  return out;
}

}  // namespace kssim
