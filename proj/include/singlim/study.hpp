#pragma once

#include "singlim/solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace singlim {

struct RateFit {
  /// Least-squares slope of log(error) against log(eps).
  double slope;
  /// Root-mean-square residual of the log-log fit.
  double residual;
  /// The largest eps was dropped because its error broke monotonicity.
  bool excluded_largest;
  int points;
};

struct SweepReport {
  std::vector<double> eps_list;
  /// sup |u_eps - u| per eps.
  std::vector<double> errors;
  /// (1/(1-gamma)) sup |T_eps(u) - T_0(u)| per eps.
  std::vector<double> gap_bounds;
  std::vector<int> iterations;
  std::vector<bool> converged;
  std::optional<RateFit> fit;
  /// eps values rejected by the resolvability guard eps/a >= 2h.
  std::vector<double> skipped;
  std::vector<std::string> warnings;

  bool all_converged() const noexcept;
};

/// Solves the problem at each eps on a fixed grid and compares with the pointwise limit.
/// eps_list must be strictly decreasing; the problem must be certified.
SweepReport sweep_eps(const ProblemInstance& prob, const std::vector<double>& eps_list, PicardOptions opts = {});

/// Needs at least three nonzero errors; returns std::nullopt otherwise.
std::optional<RateFit> fit_rate(std::span<const double> eps, std::span<const double> errors);
std::optional<RateFit> fit_rate(const SweepReport& report);

} // namespace singlim
