#include "singlim/certificate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace singlim {

namespace {

constexpr double kRMin = 1e-3;
constexpr double kRMax = 1e3;
constexpr int kPointsPerDecade = 50;
constexpr double kRelTol = 1e-6;
constexpr int kHypothesisSamples = 10000;

bool bounds_available(const NonlinearitySpec& nonlin, double R) {
  try {
    (void)nonlin.bounds(R);
    return true;
  } catch (const std::domain_error&) {
    return false;
  } catch (const std::overflow_error&) {
    return false;
  }
}

} // namespace

ContractionCertificate certify(double a2, double p_norm, const NonlinearitySpec& nonlin, double R) {
  if (!(a2 > 0.0) || !std::isfinite(a2)) throw std::invalid_argument("certify needs a^2 > 0");
  if (!(p_norm >= 0.0) || !std::isfinite(p_norm)) {
    throw std::invalid_argument("certify needs a finite |p| >= 0");
  }
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("certify needs R > 0");

  const FBounds b = nonlin.bounds(R);
  ContractionCertificate c;
  c.R = R;
  c.a2 = a2;
  c.p_norm = p_norm;
  c.M_R = b.M;
  c.M1_R = b.M1;
  c.ball_lhs = (p_norm * R + b.M) / a2;
  c.gamma = (p_norm + b.M1) / a2;
  c.cond_ball = c.ball_lhs <= R;
  c.cond_contract = c.gamma < 1.0;
  return c;
}

ContractionCertificate certify(const PotentialSpec& potential, const NonlinearitySpec& nonlin, double R) {
  const auto p = potential.p_norm();
  if (!p) {
    throw std::invalid_argument("unbounded potential has no finite |p|: use the full-Green (eps_full) operator path");
  }
  return certify(potential.a2(), *p, nonlin, R);
}

ContractionCertificate certify_full(double a2, const NonlinearitySpec& nonlin, double R) {
  return certify(a2, 0.0, nonlin, R);
}

std::optional<double> find_R(double a2, double p_norm, const NonlinearitySpec& nonlin) {
  auto passes = [&](double R) {
    return bounds_available(nonlin, R) && certify(a2, p_norm, nonlin, R).certified();
  };

  const int steps = kPointsPerDecade * static_cast<int>(std::round(std::log10(kRMax / kRMin)));
  double prev = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double R = kRMin * std::pow(10.0, static_cast<double>(k) / kPointsPerDecade);
    if (!passes(R)) {
      prev = R;
      continue;
    }
    if (k == 0) return R;
    // prev fails, R passes: shrink the bracket while keeping the passing end.
    double lo = prev;
    double hi = R;
    while ((hi - lo) > kRelTol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (passes(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
  return std::nullopt;
}

LimitHypothesesReport check_limit_hypotheses(const NonlinearitySpec& nonlin, double a2, double u0, double u_max) {
  if (!(u0 > 0.0) || !(u_max > u0)) {
    throw std::invalid_argument("limit hypotheses need 0 < u0 < u_max");
  }
  LimitHypothesesReport r;
  r.u0 = u0;
  r.u_max = u_max;
  r.monotone = true;
  r.min_ratio = std::numeric_limits<double>::infinity();

  const double step = (u_max - u0) / kHypothesisSamples;
  double prev = 0.0;
  for (int k = 0; k <= kHypothesisSamples; ++k) {
    const double u = k == kHypothesisSamples ? u_max : u0 + k * step;
    const double ratio = nonlin.value(u) / u;
    if (k > 0 && ratio < prev - 1e-12 * std::abs(prev)) {
      r.monotone = false;
    }
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = u;
    }
    prev = ratio;
  }
  r.ratio_at_u0 = nonlin.value(u0) / u0;
  r.ratio_at_umax = nonlin.value(u_max) / u_max;
  r.grows = r.ratio_at_umax >= 10.0 * r.ratio_at_u0 && r.ratio_at_u0 > 0.0;
  r.min_below_a2 = r.min_ratio < a2;
  return r;
}

} // namespace singlim
