#include "singlim/solver.hpp"

#include "singlim/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace singlim {

namespace {

constexpr double kPointResidualTol = 1e-12;
constexpr int kPointMaxIter = 500;

double sqrt_a2(const PotentialSpec& potential) { return std::sqrt(potential.a2()); }

void check_certificate_matches(const ProblemInstance& prob) {
  const auto& c = *prob.certificate;
  if (c.a2 != prob.potential.a2()) {
    throw std::invalid_argument("certificate a^2 does not match the potential");
  }
  if (prob.mode != Mode::EpsFull) {
    const auto p = prob.potential.p_norm();
    if (!p || c.p_norm < *p) {
      throw std::invalid_argument("certificate |p| does not cover the potential");
    }
  }
  const FBounds b = prob.nonlin.bounds(c.R);
  if (b.M != c.M_R || b.M1 != c.M1_R) {
    throw std::invalid_argument("certificate bounds do not match the nonlinearity");
  }
}

} // namespace

std::string to_string(Mode mode) {
  switch (mode) {
  case Mode::EpsSplit: return "eps_split";
  case Mode::EpsFull: return "eps_full";
  case Mode::Limit: return "limit";
  case Mode::Rescaled: return "rescaled";
  }
  return "unknown";
}

void ProblemInstance::validate() const {
  switch (mode) {
  case Mode::EpsSplit:
  case Mode::Rescaled:
    if (!potential.bounded()) {
      throw std::invalid_argument(to_string(mode) + " mode needs a bounded potential; use eps_full");
    }
    if (grid.bc() != Boundary::Periodic) {
      throw std::invalid_argument(to_string(mode) + " mode needs a periodic grid");
    }
    if (!(eps > 0.0)) throw std::invalid_argument(to_string(mode) + " mode needs eps > 0");
    if (mode == Mode::Rescaled && !potential.closed_form()) {
      throw std::invalid_argument("rescaled mode needs a closed-form potential");
    }
    break;
  case Mode::EpsFull:
    if (grid.bc() != Boundary::Dirichlet) throw std::invalid_argument("eps_full mode needs a Dirichlet grid");
    if (!(eps > 0.0)) throw std::invalid_argument("eps_full mode needs eps > 0");
    break;
  case Mode::Limit:
    break;
  }
  if (certificate) check_certificate_matches(*this);
}

FixedPointOperator::FixedPointOperator(const ProblemInstance& prob)
    : prob_(prob), p_(prob.grid), q_(prob.grid) {
  prob.validate();
  const double a = sqrt_a2(prob.potential);
  switch (prob.mode) {
  case Mode::EpsSplit:
    spectral_ = std::make_unique<SpectralGreen>(prob.grid, KernelParams{prob.eps, a, false});
    p_ = prob.potential.sample_p(prob.grid);
    break;
  case Mode::Rescaled: {
    spectral_ = std::make_unique<SpectralGreen>(prob.grid, KernelParams{prob.eps, a, true});
    const double eps = prob.eps;
    const Point xi = prob.xi;
    const auto& pot = prob.potential;
    p_ = sample_function(prob.grid, [&](const Point& y) {
      return pot.p({xi[0] + eps * y[0], xi[1] + eps * y[1], xi[2] + eps * y[2]});
    });
    break;
  }
  case Mode::EpsFull:
    resolvent_ = std::make_unique<ResolventOperator>(prob.grid, prob.potential, prob.eps);
    p_ = prob.potential.sample_p(prob.grid);
    break;
  case Mode::Limit:
    p_ = prob.potential.sample_p(prob.grid);
    break;
  }
  const double a2 = prob.potential.a2();
  q_ = p_.map([a2](double v) { return v + a2; });
}

FixedPointOperator::~FixedPointOperator() = default;
FixedPointOperator::FixedPointOperator(FixedPointOperator&&) noexcept = default;

ScalarField FixedPointOperator::nonlinear_source(const ScalarField& u) const {
  const auto& nonlin = prob_.nonlin;
  std::vector<double> out(u.size());
  if (prob_.mode == Mode::EpsFull) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = nonlin.value(u[i]);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -p_[i] * u[i] + nonlin.value(u[i]);
  }
  return ScalarField(u.grid(), std::move(out));
}

ScalarField FixedPointOperator::apply(const ScalarField& u) const {
  if (!(u.grid() == prob_.grid)) throw std::invalid_argument("iterate lives on a different grid");
  const ScalarField src = nonlinear_source(u);
  switch (prob_.mode) {
  case Mode::EpsSplit:
  case Mode::Rescaled:
    return spectral_->apply(src);
  case Mode::EpsFull:
    return resolvent_->solve(src);
  case Mode::Limit:
    break;
  }
  const double a = sqrt_a2(prob_.potential);
  // Same denominator as the spectral zero mode, so both maps agree bit for bit on constants.
  return src.map([d = a * a](double v) { return v / d; });
}

ScalarField FixedPointOperator::apply_limit(const ScalarField& u) const {
  if (!(u.grid() == prob_.grid)) throw std::invalid_argument("iterate lives on a different grid");
  const ScalarField src = nonlinear_source(u);
  if (prob_.mode == Mode::EpsFull) {
    std::vector<double> out(src.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i] / q_[i];
    return ScalarField(u.grid(), std::move(out));
  }
  const double a = sqrt_a2(prob_.potential);
  return src.map([d = a * a](double v) { return v / d; });
}

ScalarField apply_T_eps(const ScalarField& u, const ProblemInstance& prob) {
  if (prob.mode != Mode::EpsSplit) throw std::invalid_argument("apply_T_eps needs eps_split mode");
  return FixedPointOperator(prob).apply(u);
}

ScalarField apply_T0(const ScalarField& u, const ProblemInstance& prob) {
  if (prob.mode != Mode::Limit) throw std::invalid_argument("apply_T0 needs limit mode");
  return FixedPointOperator(prob).apply(u);
}

namespace {

SolveReport iterate(const FixedPointOperator& op, const ProblemInstance& prob, const ScalarField& init,
                    PicardOptions opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("picard tolerance must be positive");
  if (prob.certificate && prob.certificate->certified() && sup_norm(init) > prob.certificate->R) {
    throw std::invalid_argument("initial iterate lies outside the certified ball");
  }

  SolveReport report{.final = init};
  report.max_iterate_norm = sup_norm(init);
  ScalarField u = init;
  for (int n = 0; n < opts.max_iter; ++n) {
    ScalarField next = op.apply(u);
    const double res = sup_distance(next, u);
    report.residuals.push_back(res);
    report.max_iterate_norm = std::max(report.max_iterate_norm, sup_norm(next));
    u = std::move(next);
    report.iterations = n + 1;
    if (res <= opts.tol) {
      report.converged = true;
      break;
    }
  }
  for (std::size_t k = 1; k < report.residuals.size(); ++k) {
    if (report.residuals[k - 1] > 0.0) {
      report.gamma_observed = std::max(report.gamma_observed, report.residuals[k] / report.residuals[k - 1]);
    }
  }
  if (prob.certificate && prob.certificate->certified() && !report.residuals.empty()) {
    const double g = prob.certificate->gamma;
    report.aposteriori_error = g / (1.0 - g) * report.residuals.back();
  }
  report.final = std::move(u);
  return report;
}

} // namespace

SolveReport picard_solve(const ProblemInstance& prob, const ScalarField& init, PicardOptions opts) {
  const FixedPointOperator op(prob);
  return iterate(op, prob, init, opts);
}

SolveReport picard_solve(const ProblemInstance& prob, PicardOptions opts) {
  return picard_solve(prob, ScalarField(prob.grid, 0.0), opts);
}

ScalarRoot solve_limit_point(double q, double a2, const NonlinearitySpec& nonlin, double R) {
  const double p = q - a2;
  auto residual = [&](double u) { return q * u - nonlin.value(u); };
  auto accept = [&](double u) {
    const double r = std::abs(residual(u));
    return ScalarRoot{u, r, r <= kPointResidualTol && std::abs(u) <= R * (1.0 + 1e-12)};
  };

  double u = 0.0;
  try {
    for (int k = 0; k < kPointMaxIter; ++k) {
      const double next = (-p * u + nonlin.value(u)) / a2;
      const bool settled = std::abs(next - u) <= 1e-15 * (1.0 + std::abs(next));
      u = next;
      if (settled || !std::isfinite(u) || std::abs(u) > 2.0 * R) break;
    }
    if (std::isfinite(u)) {
      const ScalarRoot fp = accept(u);
      if (fp.ok) return fp;
    }
  } catch (const std::exception&) {
    // fall through to the bracketing safeguard
  }

  const double lo_val = residual(-R);
  const double hi_val = residual(R);
  if (lo_val == 0.0) return accept(-R);
  if (hi_val == 0.0) return accept(R);
  if ((lo_val < 0.0) == (hi_val < 0.0)) {
    return {u, std::numeric_limits<double>::infinity(), false};
  }
  const auto [lo, hi] = boost::math::tools::bisect(residual, -R, R, boost::math::tools::eps_tolerance<double>(52));
  const ScalarRoot a = accept(lo);
  const ScalarRoot b = accept(hi);
  return a.residual <= b.residual ? a : b;
}

ScalarField limit_solve(const ProblemInstance& prob) {
  if (!prob.certificate) throw std::invalid_argument("limit_solve needs a certificate for the ball radius");
  const double R = prob.certificate->R;
  const double a2 = prob.potential.a2();
  const ScalarField q = prob.potential.sample_q(prob.grid);

  std::vector<double> out(q.size());
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const ScalarRoot root = solve_limit_point(q[i], a2, prob.nonlin, R);
    if (!root.ok) failed.push_back(i);
    out[i] = root.u;
  }
  if (!failed.empty()) {
    std::ostringstream msg;
    msg << "limit solve failed at " << failed.size() << " node(s), first node " << failed.front()
        << ": no root of q u = f(u) in [-" << R << ", " << R << "]";
    throw NumericalError(msg.str());
  }
  return ScalarField(prob.grid, std::move(out));
}

double limit_residual(const ProblemInstance& prob, const ScalarField& u) {
  const ScalarField q = prob.potential.sample_q(prob.grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, std::abs(q[i] * u[i] - prob.nonlin.value(u[i])));
  }
  return worst;
}

double aposteriori_gap(const ScalarField& u_limit, const ProblemInstance& prob) {
  if (!prob.certificate || !(prob.certificate->gamma < 1.0)) {
    throw std::invalid_argument("a-posteriori gap needs a certificate with gamma < 1");
  }
  const FixedPointOperator op(prob);
  const double diff = sup_distance(op.apply(u_limit), op.apply_limit(u_limit));
  return diff / (1.0 - prob.certificate->gamma);
}

RescaledReport rescaled_solve(const Point& xi, double eps, const ProblemInstance& prob, PicardOptions opts) {
  if (!prob.certificate) throw std::invalid_argument("rescaled solve needs a certificate for the ball radius");
  ProblemInstance local = prob;
  local.mode = Mode::Rescaled;
  local.eps = eps;
  local.xi = xi;

  RescaledReport report{picard_solve(local, opts)};
  const double b2 = prob.potential.q(xi);
  const double R = prob.certificate->R;
  const ScalarRoot root = solve_limit_point(b2, prob.potential.a2(), prob.nonlin, R);
  if (!root.ok) throw NumericalError("no root of q(xi) w = f(w) inside the certified ball");
  report.constant_root = root.u;
  report.deviation = sup_distance(report.solve.final, ScalarField(local.grid, root.u));
  report.uniqueness_lhs = prob.nonlin.bounds(R).M1 / b2;
  report.uniqueness_holds = report.uniqueness_lhs < 1.0;
  return report;
}

ModeComparison compare_split_full(const ProblemInstance& full, const ContractionCertificate& split_certificate,
                                  double margin, PicardOptions opts) {
  if (full.mode != Mode::EpsFull) throw std::invalid_argument("compare_split_full needs an eps_full problem");
  const Grid& dg = full.grid;
  GridSpec ps = dg.spec();
  ps.n *= 2;
  ps.bc = Boundary::Periodic;

  ProblemInstance split = full;
  split.grid = Grid(ps);
  split.mode = Mode::EpsSplit;
  split.certificate = split_certificate;

  ModeComparison cmp{0.0, 0, picard_solve(full, opts), picard_solve(split, opts)};
  for (std::size_t i : interior_nodes(dg, margin)) {
    auto idx = dg.multi_index(i);
    for (int d = 0; d < dg.dims(); ++d) idx[d] = 2 * idx[d] + 1;
    const double diff = std::abs(cmp.full.final[i] - cmp.split.final[split.grid.flat_index(idx)]);
    cmp.interior_difference = std::max(cmp.interior_difference, diff);
    ++cmp.interior_nodes;
  }
  return cmp;
}

} // namespace singlim
