#pragma once

#include "singlim/field.hpp"

#include <optional>
#include <vector>

namespace singlim {

enum class PotentialFamily { Constant, ShiftedSine, RadialQuadratic, Tabulated };

/**
 * Potential q(x) >= a^2 together with the split p = q - a^2 >= 0.
 *
 * Families:
 *   Constant(b^2)           q = b^2, b^2 >= a^2
 *   ShiftedSine(omega)      q = a^2 + 1 + sin(omega x_1)
 *   RadialQuadratic(c)      q = a^2 + c |x|^2   (unbounded for c > 0)
 *   Tabulated(field)        q given on a grid, min q >= a^2
 */
class PotentialSpec {
public:
  static PotentialSpec constant(double a2, double b2);
  static PotentialSpec shifted_sine(double a2, double omega);
  static PotentialSpec radial_quadratic(double a2, double c);
  static PotentialSpec tabulated(double a2, ScalarField q);

  PotentialFamily family() const noexcept { return family_; }
  double a2() const noexcept { return a2_; }
  /// b^2 for Constant, omega for ShiftedSine, c for RadialQuadratic.
  double parameter() const noexcept { return param_; }

  bool bounded() const noexcept;
  bool closed_form() const noexcept { return family_ != PotentialFamily::Tabulated; }

  /// Pointwise q; throws std::logic_error for tabulated potentials.
  double q(const Point& x) const;
  double p(const Point& x) const { return q(x) - a2_; }

  ScalarField sample_q(const Grid& grid) const;
  ScalarField sample_p(const Grid& grid) const;

  /// sup (q - a^2); std::nullopt marks an unbounded potential.
  std::optional<double> p_norm() const;

  /// q scaled by s >= 1 everywhere (a^2 kept); stays a valid potential.
  PotentialSpec scaled(double s) const;

private:
  PotentialSpec(PotentialFamily family, double a2, double param);

  PotentialFamily family_;
  double a2_;
  double param_;
  double scale_ = 1.0;
  std::optional<ScalarField> table_;
};

enum class NonlinearityFamily { Constant, PowerShift, Exponential, Polynomial };

struct FValue {
  double f;
  double df;
};

/// M(R) = max_{|u|<=R} |f(u)| and M1(R) = max_{|xi|<=2R} |f'(xi)|.
struct FBounds {
  double M;
  double M1;
};

/**
 * Smooth nonlinearity f with its derivative and sup bounds.
 *
 *   Constant(c)         f = c
 *   PowerShift(m)       f = (u + 1)^m, m >= 1
 *   Exponential         f = e^u
 *   Polynomial(c_k)     f = sum_k c_k u^k
 */
class NonlinearitySpec {
public:
  static NonlinearitySpec constant(double c);
  static NonlinearitySpec power_shift(double m);
  static NonlinearitySpec exponential();
  static NonlinearitySpec polynomial(std::vector<double> coeffs);

  NonlinearityFamily family() const noexcept { return family_; }
  double parameter() const noexcept { return param_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  /// Throws std::overflow_error for e^u with u > 700, std::domain_error outside the domain of f.
  FValue eval(double u) const;
  double value(double u) const { return eval(u).f; }

  FBounds bounds(double R) const;

  /// Records the f(0) != 0 condition that keeps the solution away from zero.
  bool nonzero_at_origin() const { return value(0.0) != 0.0; }

private:
  NonlinearitySpec(NonlinearityFamily family, double param, std::vector<double> coeffs = {});

  NonlinearityFamily family_;
  double param_;
  std::vector<double> coeffs_;
};

/// Uniform sampling (10^4 intervals) plus local refinement of the best sample.
double max_abs_on_interval(const std::function<double(double)>& fn, double lo, double hi);

} // namespace singlim
