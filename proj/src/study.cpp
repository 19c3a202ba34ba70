#include "singlim/study.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace singlim {

bool SweepReport::all_converged() const noexcept {
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

SweepReport sweep_eps(const ProblemInstance& prob, const std::vector<double>& eps_list, PicardOptions opts) {
  if (prob.mode != Mode::EpsSplit && prob.mode != Mode::EpsFull) {
    throw std::invalid_argument("sweeps run in eps_split or eps_full mode");
  }
  if (!prob.certificate || !prob.certificate->certified()) {
    throw std::invalid_argument("sweep needs a certified problem");
  }
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("eps list must be strictly decreasing");
  }

  const double a = std::sqrt(prob.potential.a2());
  const double h = prob.grid.spacing();
  const ScalarField u_limit = limit_solve(prob);

  SweepReport report;
  for (double eps : eps_list) {
    if (eps / a < 2.0 * h) {
      report.skipped.push_back(eps);
      std::ostringstream msg;
      msg << "eps = " << eps << " skipped: decay length eps/a = " << eps / a << " is below 2h = " << 2.0 * h;
      report.warnings.push_back(msg.str());
      continue;
    }
    ProblemInstance local = prob;
    local.eps = eps;
    const SolveReport solve = picard_solve(local, opts);
    report.eps_list.push_back(eps);
    report.errors.push_back(sup_distance(solve.final, u_limit));
    report.gap_bounds.push_back(aposteriori_gap(u_limit, local));
    report.iterations.push_back(solve.iterations);
    report.converged.push_back(solve.converged);
  }
  report.fit = fit_rate(report);
  if (report.fit && report.fit->excluded_largest) {
    report.warnings.push_back("largest eps excluded from the rate fit (error not below the next one)");
  }
  return report;
}

std::optional<RateFit> fit_rate(std::span<const double> eps, std::span<const double> errors) {
  if (eps.size() != errors.size()) throw std::invalid_argument("fit_rate needs matching eps and error lists");

  std::size_t start = 0;
  if (errors.size() >= 2 && errors[0] < errors[1]) start = 1;

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = start; i < errors.size(); ++i) {
    if (errors[i] > 0.0) {
      xs.push_back(std::log(eps[i]));
      ys.push_back(std::log(errors[i]));
    }
  }
  if (xs.size() < 3) return std::nullopt;

  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  return RateFit{slope, std::sqrt(ss / n), start == 1, static_cast<int>(xs.size())};
}

std::optional<RateFit> fit_rate(const SweepReport& report) { return fit_rate(report.eps_list, report.errors); }

} // namespace singlim
