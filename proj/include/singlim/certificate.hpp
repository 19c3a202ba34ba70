#pragma once

#include "singlim/problem.hpp"

#include <optional>

namespace singlim {

/**
 * Contraction certificate for T(u) = G[-p u + f(u)] on the ball
 * B_R = { v : sup|v| <= R }.
 *
 *   ball:      (|p| R + M(R)) / a^2 <= R     so T maps B_R into itself
 *   contract:  gamma = (|p| + M1(R)) / a^2 < 1
 */
struct ContractionCertificate {
  double R = 0.0;
  double a2 = 0.0;
  double p_norm = 0.0;
  double M_R = 0.0;
  double M1_R = 0.0;
  double gamma = 0.0;
  /// Left-hand side of the ball condition, (|p| R + M(R)) / a^2.
  double ball_lhs = 0.0;
  bool cond_ball = false;
  bool cond_contract = false;

  bool certified() const noexcept { return cond_ball && cond_contract; }
};

/// Throws std::invalid_argument for a2 <= 0, R <= 0, or a negative/non-finite p_norm.
ContractionCertificate certify(double a2, double p_norm, const NonlinearitySpec& nonlin, double R);

/// Uses the potential's p_norm. An unbounded potential is rejected: it must go
/// through the full-Green operator, see certify_full().
ContractionCertificate certify(const PotentialSpec& potential, const NonlinearitySpec& nonlin, double R);

/// Certificate for u = g_q[f(u)] with the full Green function of -eps^2 Lap + q.
/// The mass bound int g_q <= 1/a^2 reduces it to certify(a2, 0, nonlin, R).
ContractionCertificate certify_full(double a2, const NonlinearitySpec& nonlin, double R);

/// Smallest R in [1e-3, 1e3] (log grid, then bisection to 1e-6 relative) passing both conditions.
std::optional<double> find_R(double a2, double p_norm, const NonlinearitySpec& nonlin);

struct LimitHypothesesReport {
  double u0 = 0.0;
  double u_max = 0.0;
  bool monotone = false;
  bool grows = false;
  double ratio_at_u0 = 0.0;
  double ratio_at_umax = 0.0;
  double min_ratio = 0.0;
  double argmin = 0.0;
  bool min_below_a2 = false;

  bool passed() const noexcept { return monotone && grows && min_below_a2; }
};

/// Sampled advisory check of the hypotheses on f(u)/u over [u0, u_max].
LimitHypothesesReport check_limit_hypotheses(const NonlinearitySpec& nonlin, double a2, double u0, double u_max);

} // namespace singlim
