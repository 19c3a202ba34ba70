#include "singlim/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace singlim {

namespace {

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::domain_error("non-finite field value at node " + std::to_string(i));
    }
  }
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

} // namespace

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  if (spec.dims < 1 || spec.dims > 3) {
    throw std::invalid_argument("grid dims must be 1, 2 or 3");
  }
  if (spec.n < 8) {
    throw std::invalid_argument("grid needs n >= 8 points per axis, got " + std::to_string(spec.n));
  }
  if (!(spec.L > 0.0) || !std::isfinite(spec.L)) {
    throw std::invalid_argument("grid length L must be positive and finite");
  }
  h_ = spec.L / spec.n;
  size_ = 1;
  for (int d = 0; d < spec.dims; ++d) {
    size_ *= static_cast<std::size_t>(spec.n);
  }
}

double Grid::coordinate(int i) const noexcept {
  const double offset = spec_.bc == Boundary::Periodic ? 0.0 : 0.5;
  return -0.5 * spec_.L + (i + offset) * h_;
}

std::array<int, 3> Grid::multi_index(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(spec_.n);
  for (int d = spec_.dims - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t Grid::flat_index(const std::array<int, 3>& idx) const noexcept {
  std::size_t flat = 0;
  for (int d = 0; d < spec_.dims; ++d) {
    flat = flat * static_cast<std::size_t>(spec_.n) + static_cast<std::size_t>(idx[d]);
  }
  return flat;
}

Point Grid::node(std::size_t flat) const noexcept {
  const auto idx = multi_index(flat);
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < spec_.dims; ++d) {
    x[d] = coordinate(idx[d]);
  }
  return x;
}

std::size_t Grid::center_node() const noexcept {
  const int c = spec_.n / 2;
  return flat_index({c, c, c});
}

bool Grid::operator==(const Grid& other) const noexcept {
  return spec_.dims == other.spec_.dims && spec_.n == other.spec_.n && spec_.L == other.spec_.L &&
         spec_.bc == other.spec_.bc;
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

ScalarField::ScalarField(Grid grid, double value) : grid_(std::move(grid)), values_(grid_.size(), value) {
  if (!std::isfinite(value)) {
    throw std::domain_error("non-finite constant field value");
  }
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field value count " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
  require_finite(values_);
}

ScalarField ScalarField::map(const std::function<double(double)>& fn) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return ScalarField(grid_, std::move(out));
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += other.values_[i];
  }
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] -= other.values_[i];
  }
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) {
    v *= s;
  }
  require_finite(values_);
  return *this;
}

bool ScalarField::is_constant() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

ScalarField operator+(ScalarField lhs, const ScalarField& rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, const ScalarField& rhs) { return lhs -= rhs; }
ScalarField operator*(double s, ScalarField f) { return f *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] * b[i];
  }
  return ScalarField(a.grid(), std::move(out));
}

ScalarField sample_function(const Grid& grid, const FieldExpr& expr) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = expr(grid.node(i));
  }
  return ScalarField(grid, std::move(values));
}

double sup_norm(const ScalarField& field) noexcept {
  double m = 0.0;
  for (double v : field.values()) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

double max_value(const ScalarField& field) noexcept {
  const auto v = field.values();
  return *std::max_element(v.begin(), v.end());
}

double min_value(const ScalarField& field) noexcept {
  const auto v = field.values();
  return *std::min_element(v.begin(), v.end());
}

} // namespace singlim
