#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace kssim {

/// Cell-centred rectangular mesh on the box (0, L_x) or (0, L_x) x (0, L_y).
///
/// Cells are numbered x-fastest: cell (i, j) has flat index i + nx * j. In 1D the
/// unused y axis is carried as a single cell of unit extent so that index
/// arithmetic is identical in both dimensions; it never contributes to the cell
/// volume or the domain measure.
class Grid {
 public:
  int dim() const { return dim_; }
  double length(int axis) const { return lengths_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }

  int nx() const { return cells_[0]; }
  int ny() const { return cells_[1]; }
  std::size_t cell_count() const { return static_cast<std::size_t>(cells_[0]) * cells_[1]; }

  /// Number of faces normal to `axis`, boundary faces included.
  std::size_t face_count(int axis) const;

  /// Product of the spacings over the active axes.
  double cell_volume() const { return cell_volume_; }
  double measure() const { return measure_; }
  double min_spacing() const;

  /// Centre coordinate of cell `index` along `axis`.
  double center(int axis, int index) const { return (index + 0.5) * spacing_[axis]; }

  std::size_t cell_index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(cells_[0]) * j;
  }

  bool operator==(const Grid&) const = default;

 private:
  friend Grid build_grid(int dim, std::span<const double> lengths, std::span<const int> cells);
  Grid() = default;

  int dim_ = 1;
  std::array<double, 2> lengths_{1.0, 1.0};
  std::array<int, 2> cells_{1, 1};
  std::array<double, 2> spacing_{1.0, 1.0};
  double cell_volume_ = 1.0;
  double measure_ = 1.0;
};

/// Validates and builds a grid. Throws InvalidArgument for dim outside {1,2},
/// non-positive lengths or fewer than 4 cells along an axis.
Grid build_grid(int dim, std::span<const double> lengths, std::span<const int> cells);

/// One value per cell.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.cell_count(), fill) {}
  ScalarField(const Grid& g, std::vector<double> v);

  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }
  double& at(int i, int j = 0) { return values[grid.cell_index(i, j)]; }
  double at(int i, int j = 0) const { return values[grid.cell_index(i, j)]; }
  std::size_t size() const { return values.size(); }

  bool operator==(const ScalarField&) const = default;
};

/// Face-normal components. Axis-0 faces are indexed i + (nx + 1) * j with face i
/// on the left of cell i; axis-1 faces are indexed i + nx * j with face j below
/// cell j. Boundary faces hold zero (no-flux condition).
struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 2> faces;

  explicit VectorField(const Grid& g);

  double& x(int i, int j = 0) { return faces[0][x_index(i, j)]; }
  double x(int i, int j = 0) const { return faces[0][x_index(i, j)]; }
  double& y(int i, int j) { return faces[1][y_index(i, j)]; }
  double y(int i, int j) const { return faces[1][y_index(i, j)]; }

  std::size_t x_index(int i, int j) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(grid.nx() + 1) * j;
  }
  std::size_t y_index(int i, int j) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(grid.nx()) * j;
  }

  /// True when every boundary face is exactly zero.
  bool boundary_is_zero() const;
  double max_abs() const;
};

/// Midpoint quadrature: cell volume times the sum of the cell values.
double integrate(const ScalarField& f);

/// Discrete L^q norm with the midpoint rule; q = infinity gives max |f|.
/// Throws InvalidArgument for q < 1.
double lp_norm(const ScalarField& f, double q);

/// Quadrature inner product <f, g> = cell volume * sum f_i g_i.
double inner_product(const ScalarField& f, const ScalarField& g);

double max_value(const ScalarField& f);
double min_value(const ScalarField& f);

VectorField gradient_faces(const ScalarField& f);
ScalarField divergence_cells(const VectorField& F);
ScalarField laplacian(const ScalarField& f);

/// Cell-centred |grad f|, each component averaged from the two bounding faces.
ScalarField gradient_magnitude_cells(const VectorField& g);

}  // namespace kssim
