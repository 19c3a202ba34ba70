#pragma once

#include "singlim/certificate.hpp"
#include "singlim/field.hpp"
#include "singlim/greens.hpp"
#include "singlim/problem.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace singlim {

/**
 * Which fixed-point map a problem iterates.
 *
 *   EpsSplit   u = G_eps[-p u + f(u)], G_eps the constant-coefficient Green
 *              function of -eps^2 Lap + a^2 (spectral, periodic grid)
 *   EpsFull    u = g_q[f(u)], g_q the Green function of -eps^2 Lap + q
 *              (finite differences, Dirichlet grid)
 *   Limit      u = (-p u + f(u)) / a^2, the eps = 0 map
 *   Rescaled   w = G_1[-p(xi + eps y) w + f(w)] in stretched y = (x - xi)/eps
 */
enum class Mode { EpsSplit, EpsFull, Limit, Rescaled };

std::string to_string(Mode mode);

struct ProblemInstance {
  Grid grid;
  PotentialSpec potential;
  NonlinearitySpec nonlin;
  double eps = 0.0;
  std::optional<ContractionCertificate> certificate;
  Mode mode = Mode::EpsSplit;
  /// Stretching center, Rescaled mode only.
  Point xi{0.0, 0.0, 0.0};

  /// Throws std::invalid_argument when the mode's requirements are not met.
  void validate() const;
};

/// The fixed-point map of a problem, with its Green action prepared once.
class FixedPointOperator {
public:
  explicit FixedPointOperator(const ProblemInstance& prob);
  ~FixedPointOperator();
  FixedPointOperator(FixedPointOperator&&) noexcept;

  ScalarField apply(const ScalarField& u) const;
  /// The eps = 0 counterpart for the same splitting: (-p u + f(u))/a^2, or f(u)/q for EpsFull.
  ScalarField apply_limit(const ScalarField& u) const;

private:
  ScalarField nonlinear_source(const ScalarField& u) const;

  ProblemInstance prob_;
  ScalarField p_;
  ScalarField q_;
  std::unique_ptr<SpectralGreen> spectral_;
  std::unique_ptr<ResolventOperator> resolvent_;
};

ScalarField apply_T_eps(const ScalarField& u, const ProblemInstance& prob);
ScalarField apply_T0(const ScalarField& u, const ProblemInstance& prob);

struct SolveReport {
  ScalarField final;
  int iterations = 0;
  /// sup |u_{n+1} - u_n| for n = 0, 1, ...
  std::vector<double> residuals{};
  /// Largest ratio of consecutive residuals (0 with fewer than two residuals).
  double gamma_observed = 0.0;
  /// gamma/(1-gamma) times the last residual; set for certified problems only.
  std::optional<double> aposteriori_error{};
  bool converged = false;
  /// Largest sup norm over all iterates, init included.
  double max_iterate_norm = 0.0;
};

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Iterates u_{n+1} = T(u_n). Running out of iterations gives converged = false.
SolveReport picard_solve(const ProblemInstance& prob, const ScalarField& init, PicardOptions opts = {});
SolveReport picard_solve(const ProblemInstance& prob, PicardOptions opts = {});

struct ScalarRoot {
  double u;
  double residual;
  bool ok;
};

/// Root of q u = f(u) in [-R, R]: fixed-point iteration of u = (-p u + f(u))/a^2
/// first, bisection on q u - f(u) when that does not settle.
ScalarRoot solve_limit_point(double q, double a2, const NonlinearitySpec& nonlin, double R);

/// Pointwise solution of q(x) u = f(u). Needs a certificate for R. Throws NumericalError
/// listing failed nodes.
ScalarField limit_solve(const ProblemInstance& prob);

/// max over nodes of |q u - f(u)|.
double limit_residual(const ProblemInstance& prob, const ScalarField& u);

/// (1/(1-gamma)) sup |T_eps(u) - T_0(u)|.
double aposteriori_gap(const ScalarField& u_limit, const ProblemInstance& prob);

struct RescaledReport {
  SolveReport solve;
  /// Root of q(xi) w = f(w).
  double constant_root = 0.0;
  /// sup_y |w(y) - constant_root|.
  double deviation = 0.0;
  /// M1(R) / q(xi).
  double uniqueness_lhs = 0.0;
  bool uniqueness_holds = false;
};

/// prob.grid is the periodic y-grid; prob.eps and prob.xi are overridden by the arguments.
RescaledReport rescaled_solve(const Point& xi, double eps, const ProblemInstance& prob, PicardOptions opts = {});

struct ModeComparison {
  double interior_difference;
  int interior_nodes;
  SolveReport full;
  SolveReport split;
};

/// Solves EpsFull on the Dirichlet grid and EpsSplit on a periodic grid with twice the
/// nodes (its odd nodes coincide with the Dirichlet nodes), then compares at nodes at
/// least margin * L inside the box.
ModeComparison compare_split_full(const ProblemInstance& full, const ContractionCertificate& split_certificate,
                                  double margin, PicardOptions opts = {});

} // namespace singlim
