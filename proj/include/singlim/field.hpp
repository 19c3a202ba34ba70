#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace singlim {

enum class Boundary { Periodic, Dirichlet };

struct GridSpec {
  int dims = 1;
  int n = 8;
  double L = 1.0;
  Boundary bc = Boundary::Periodic;
};

using Point = std::array<double, 3>;

/**
 * Uniform tensor grid with the same number of nodes on every axis.
 *
 * Periodic grids place nodes at -L/2 + i h (the origin is a node for even n).
 * Dirichlet grids are cell centered, x_i = -L/2 + (i + 1/2) h, with the zero
 * boundary value imposed one spacing beyond the outermost nodes.
 *
 * Flat node ordering is row-major with axis 0 slowest.
 */
class Grid {
public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  int dims() const noexcept { return spec_.dims; }
  int n() const noexcept { return spec_.n; }
  double length() const noexcept { return spec_.L; }
  Boundary bc() const noexcept { return spec_.bc; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return size_; }

  double coordinate(int i) const noexcept;
  std::array<int, 3> multi_index(std::size_t flat) const noexcept;
  std::size_t flat_index(const std::array<int, 3>& idx) const noexcept;
  /// Coordinates of a node; unused trailing axes are 0.
  Point node(std::size_t flat) const noexcept;

  /// Node closest to the box center (exact center for periodic even n or Dirichlet odd n).
  std::size_t center_node() const noexcept;

  bool operator==(const Grid& other) const noexcept;

private:
  GridSpec spec_;
  double h_;
  std::size_t size_;
};

Grid build_grid(const GridSpec& spec);

/// Real values on every node of a grid; always finite.
class ScalarField {
public:
  ScalarField(Grid grid, double value = 0.0);
  ScalarField(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Elementwise transform; result must stay finite.
  ScalarField map(const std::function<double(double)>& fn) const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  /// True when every value is bitwise equal to the first.
  bool is_constant() const noexcept;

private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField lhs, const ScalarField& rhs);
ScalarField operator-(ScalarField lhs, const ScalarField& rhs);
ScalarField operator*(double s, ScalarField f);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

using FieldExpr = std::function<double(const Point&)>;

/// Evaluates expr at every node. Throws std::domain_error on a non-finite value.
ScalarField sample_function(const Grid& grid, const FieldExpr& expr);

double sup_norm(const ScalarField& field) noexcept;
double sup_distance(const ScalarField& a, const ScalarField& b);
double max_value(const ScalarField& field) noexcept;
double min_value(const ScalarField& field) noexcept;

} // namespace singlim
