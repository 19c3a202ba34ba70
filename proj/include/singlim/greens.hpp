#pragma once

#include "singlim/field.hpp"
#include "singlim/fourier.hpp"
#include "singlim/problem.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <optional>
#include <vector>

namespace singlim {

// ---------------------------------------------------------------------------
// Free-space Yukawa kernel
// ---------------------------------------------------------------------------

/// Screened kernel of -eps^2 Lap + a^2. With rescaled set, the eps = 1 form
/// e^{-a r} / (4 pi r) is used regardless of eps.
struct KernelParams {
  double eps = 1.0;
  double a = 1.0;
  bool rescaled = false;

  double effective_eps() const noexcept { return rescaled ? 1.0 : eps; }
  void validate() const;
};

/// g(r) = e^{-(a/eps) r} / (4 pi r eps^2). Throws std::domain_error for r <= 0.
double yukawa_eval(const KernelParams& params, double r);

struct KernelMass {
  double value;
  /// Set when r_max < 20 eps/a, where the neglected tail exceeds ~1e-7 relative.
  bool truncated;
};

/// Radial quadrature of 4 pi r^2 g(r) over [0, r_max]; tends to 1/a^2.
KernelMass kernel_mass_quadrature(const KernelParams& params, double r_max);

// ---------------------------------------------------------------------------
// Spectral Green action on a periodic grid (bounded potentials)
// ---------------------------------------------------------------------------

/// Fourier multiplier 1 / (eps^2 |k|^2 + a^2) on a periodic grid.
class SpectralGreen {
public:
  SpectralGreen(const Grid& grid, const KernelParams& params);

  const Grid& grid() const noexcept { return fft_.grid(); }
  const KernelParams& params() const noexcept { return params_; }

  /// Constant fields are pure zero modes and map exactly to c/a^2.
  ScalarField apply(const ScalarField& v) const;

private:
  KernelParams params_;
  RealFourierTransform fft_;
  std::vector<double> multiplier_;
};

ScalarField green_apply_spectral(const ScalarField& v, const KernelParams& params);

struct LimitErrorRow {
  double eps;
  double error;
};

/// sup |G_eps h - h/a^2| per eps (periodic grid).
std::vector<LimitErrorRow> delta_limit_check(const ScalarField& h, const std::vector<double>& eps_list, double a);

// ---------------------------------------------------------------------------
// Finite-difference resolvent on a Dirichlet box (growing potentials)
// ---------------------------------------------------------------------------

struct LinearSolveOptions {
  double rel_tol = 1e-12;
  int max_iter = 20000;
};

/**
 * Discrete -eps^2 Lap_h + q on a Dirichlet grid: (2 dims + 1)-point stencil
 * with zero ghost values, symmetric and strictly diagonally dominant (an
 * M-matrix), so its inverse is entrywise nonnegative.
 */
class ResolventOperator {
public:
  ResolventOperator(const Grid& grid, const PotentialSpec& potential, double eps, LinearSolveOptions opts = {});
  ~ResolventOperator();
  ResolventOperator(ResolventOperator&&) noexcept;
  ResolventOperator& operator=(ResolventOperator&&) noexcept;

  const Grid& grid() const noexcept { return grid_; }
  const PotentialSpec& potential() const noexcept { return potential_; }
  const ScalarField& q() const noexcept { return q_; }
  double eps() const noexcept { return eps_; }
  const Eigen::SparseMatrix<double>& matrix() const noexcept;

  /// Solves (-eps^2 Lap_h + q) v = rhs. Throws NumericalError with the residual on failure.
  ScalarField solve(const ScalarField& rhs) const;
  /// Relative residual |A v - rhs| / |rhs| of the last solve.
  double last_residual() const noexcept { return last_residual_; }

  /// Discrete Green column: response to a unit impulse scaled by h^{-dims}.
  ScalarField green_column(std::size_t source) const;

private:
  struct Impl;
  Grid grid_;
  PotentialSpec potential_;
  double eps_;
  ScalarField q_;
  std::unique_ptr<Impl> impl_;
  mutable double last_residual_ = 0.0;
};

ScalarField resolvent_apply(const ResolventOperator& op, const ScalarField& rhs);

struct MassBoundResult {
  bool holds;
  double max_value;
  double min_value;
  double bound;
};

/// Solves op v = 1 and checks 0 <= v <= 1/a^2 within the 1e-8 ordering tolerance.
MassBoundResult mass_bound_check(const ResolventOperator& op);

struct ComparisonRow {
  std::size_t source;
  double max_violation; // max (G1 - G2), <= tol when ordered
  double min_gap;       // min (G2 - G1)
};

struct ComparisonResult {
  bool holds;
  std::vector<ComparisonRow> rows;
};

/// Checks G1 <= G2 + tol for q1 >= q2 column by column. Throws std::invalid_argument
/// when q1 >= q2 fails somewhere on the grid.
ComparisonResult green_comparison_check(const Grid& grid, const PotentialSpec& q1, const PotentialSpec& q2,
                                        const std::vector<std::size_t>& sources, double eps);

struct DistributionalLimitResult {
  std::vector<LimitErrorRow> rows;
  /// h is not negligible near the boundary.
  bool boundary_warning;
};

/// sup over interior nodes of |(op_eps^{-1} h) - h/q| per eps. Interior nodes are
/// those at least margin * L from the box faces.
DistributionalLimitResult distributional_limit_check(const ScalarField& h, const PotentialSpec& potential,
                                                     const std::vector<double>& eps_list, double margin = 0.125);

/// Ordering/positivity tolerance for Green checks.
inline constexpr double kOrderingTol = 1e-8;

/// Nodes whose distance from every face is at least margin * L.
std::vector<std::size_t> interior_nodes(const Grid& grid, double margin);

/// Smooth bump exp(1 - 1/(1 - r^2/rho^2)) supported in |x - center| < rho, peak 1.
ScalarField compact_bump(const Grid& grid, double rho, const Point& center = {0.0, 0.0, 0.0});

} // namespace singlim
