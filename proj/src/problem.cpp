#include "singlim/problem.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace singlim {

namespace {

constexpr double kExpOverflow = 700.0;
constexpr int kBoundSamples = 10000;

bool is_integer(double m) { return std::floor(m) == m; }

} // namespace

PotentialSpec::PotentialSpec(PotentialFamily family, double a2, double param)
    : family_(family), a2_(a2), param_(param) {
  if (!(a2 > 0.0) || !std::isfinite(a2)) {
    throw std::invalid_argument("potential needs a^2 > 0");
  }
  if (!std::isfinite(param)) {
    throw std::invalid_argument("potential parameter must be finite");
  }
}

PotentialSpec PotentialSpec::constant(double a2, double b2) {
  if (b2 < a2) {
    throw std::invalid_argument("constant potential b^2 = " + std::to_string(b2) + " is below a^2");
  }
  return PotentialSpec(PotentialFamily::Constant, a2, b2);
}

PotentialSpec PotentialSpec::shifted_sine(double a2, double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("shifted sine needs omega > 0");
  }
  return PotentialSpec(PotentialFamily::ShiftedSine, a2, omega);
}

PotentialSpec PotentialSpec::radial_quadratic(double a2, double c) {
  if (c < 0.0) {
    throw std::invalid_argument("radial quadratic needs c >= 0");
  }
  return PotentialSpec(PotentialFamily::RadialQuadratic, a2, c);
}

PotentialSpec PotentialSpec::tabulated(double a2, ScalarField q) {
  PotentialSpec spec(PotentialFamily::Tabulated, a2, 0.0);
  if (min_value(q) < a2) {
    throw std::invalid_argument("tabulated potential violates q >= a^2");
  }
  spec.table_ = std::move(q);
  return spec;
}

bool PotentialSpec::bounded() const noexcept {
  return !(family_ == PotentialFamily::RadialQuadratic && param_ > 0.0);
}

double PotentialSpec::q(const Point& x) const {
  double base = 0.0;
  switch (family_) {
  case PotentialFamily::Constant:
    base = param_;
    break;
  case PotentialFamily::ShiftedSine:
    base = a2_ + 1.0 + std::sin(param_ * x[0]);
    break;
  case PotentialFamily::RadialQuadratic:
    base = a2_ + param_ * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    break;
  case PotentialFamily::Tabulated:
    throw std::logic_error("tabulated potential has no pointwise closed form");
  }
  return scale_ * base;
}

ScalarField PotentialSpec::sample_q(const Grid& grid) const {
  if (family_ == PotentialFamily::Tabulated) {
    if (!(table_->grid() == grid)) {
      throw std::invalid_argument("tabulated potential sampled on a foreign grid");
    }
    return scale_ * *table_;
  }
  return sample_function(grid, [this](const Point& x) { return q(x); });
}

ScalarField PotentialSpec::sample_p(const Grid& grid) const {
  const double a2 = a2_;
  return sample_q(grid).map([a2](double v) { return v - a2; });
}

std::optional<double> PotentialSpec::p_norm() const {
  switch (family_) {
  case PotentialFamily::Constant:
    return scale_ * param_ - a2_;
  case PotentialFamily::ShiftedSine:
    return scale_ * (a2_ + 2.0) - a2_;
  case PotentialFamily::RadialQuadratic:
    if (param_ > 0.0) return std::nullopt;
    return scale_ * a2_ - a2_;
  case PotentialFamily::Tabulated:
    return scale_ * max_value(*table_) - a2_;
  }
  return std::nullopt;
}

PotentialSpec PotentialSpec::scaled(double s) const {
  if (!(s >= 1.0)) {
    throw std::invalid_argument("potential scale must be >= 1 to keep q >= a^2");
  }
  PotentialSpec out = *this;
  out.scale_ *= s;
  return out;
}

NonlinearitySpec::NonlinearitySpec(NonlinearityFamily family, double param, std::vector<double> coeffs)
    : family_(family), param_(param), coeffs_(std::move(coeffs)) {}

NonlinearitySpec NonlinearitySpec::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("constant nonlinearity must be finite");
  return NonlinearitySpec(NonlinearityFamily::Constant, c);
}

NonlinearitySpec NonlinearitySpec::power_shift(double m) {
  if (!(m >= 1.0) || !std::isfinite(m)) {
    throw std::invalid_argument("power shift exponent must satisfy m >= 1");
  }
  return NonlinearitySpec(NonlinearityFamily::PowerShift, m);
}

NonlinearitySpec NonlinearitySpec::exponential() { return NonlinearitySpec(NonlinearityFamily::Exponential, 0.0); }

NonlinearitySpec NonlinearitySpec::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficients must be finite");
  }
  return NonlinearitySpec(NonlinearityFamily::Polynomial, 0.0, std::move(coeffs));
}

FValue NonlinearitySpec::eval(double u) const {
  if (!std::isfinite(u)) {
    throw std::domain_error("nonlinearity evaluated at a non-finite argument");
  }
  switch (family_) {
  case NonlinearityFamily::Constant:
    return {param_, 0.0};
  case NonlinearityFamily::PowerShift: {
    const double base = u + 1.0;
    if (base < 0.0 && !is_integer(param_)) {
      throw std::domain_error("(u+1)^m with non-integer m is undefined for u < -1");
    }
    return {std::pow(base, param_), param_ * std::pow(base, param_ - 1.0)};
  }
  case NonlinearityFamily::Exponential: {
    if (u > kExpOverflow) {
      throw std::overflow_error("exp(u) overflow guard: u = " + std::to_string(u));
    }
    const double e = std::exp(u);
    return {e, e};
  }
  case NonlinearityFamily::Polynomial: {
    double f = 0.0;
    double df = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      df = df * u + f;
      f = f * u + *it;
    }
    return {f, df};
  }
  }
  return {0.0, 0.0};
}

double max_abs_on_interval(const std::function<double(double)>& fn, double lo, double hi) {
  const double step = (hi - lo) / kBoundSamples;
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k <= kBoundSamples; ++k) {
    const double x = k == kBoundSamples ? hi : lo + k * step;
    const double v = std::abs(fn(x));
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  if (best == 0 || best == kBoundSamples) {
    return best_val;
  }
  const double left = lo + (best - 1) * step;
  const double right = lo + (best + 1) * step;
  const auto [x, neg] = boost::math::tools::brent_find_minima(
      [&](double t) { return -std::abs(fn(t)); }, left, right, std::numeric_limits<double>::digits / 2);
  (void)x;
  return std::max(best_val, -neg);
}

FBounds NonlinearitySpec::bounds(double R) const {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("bounds need R > 0");
  }
  switch (family_) {
  case NonlinearityFamily::Constant:
    return {std::abs(param_), 0.0};
  case NonlinearityFamily::PowerShift: {
    // |u+1| is largest at the right endpoint of a symmetric interval.
    if (!is_integer(param_) && 2.0 * R > 1.0) {
      throw std::domain_error("non-integer power shift needs 2R <= 1 so f' stays defined");
    }
    const double m = param_;
    return {std::pow(1.0 + R, m), m * std::pow(1.0 + 2.0 * R, m - 1.0)};
  }
  case NonlinearityFamily::Exponential:
    if (2.0 * R > kExpOverflow) {
      throw std::overflow_error("exp bound overflow for R = " + std::to_string(R));
    }
    return {std::exp(R), std::exp(2.0 * R)};
  case NonlinearityFamily::Polynomial:
    return {max_abs_on_interval([this](double u) { return eval(u).f; }, -R, R),
            max_abs_on_interval([this](double u) { return eval(u).df; }, -2.0 * R, 2.0 * R)};
  }
  return {0.0, 0.0};
}

} // namespace singlim
