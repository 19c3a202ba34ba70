#include "singlim/greens.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace singlim {

void KernelParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("kernel needs eps > 0");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("kernel needs a > 0");
}

double yukawa_eval(const KernelParams& params, double r) {
  params.validate();
  if (!(r > 0.0)) {
    throw std::domain_error("Yukawa kernel is singular at r <= 0");
  }
  const double e = params.effective_eps();
  return std::exp(-(params.a / e) * r) / (4.0 * std::numbers::pi * r * e * e);
}

KernelMass kernel_mass_quadrature(const KernelParams& params, double r_max) {
  params.validate();
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  const double decay = params.effective_eps() / params.a;

  // Integrate on panels one decay length wide so each panel sees a smooth,
  // well-scaled integrand; the r^2 factor cancels the 1/r singularity.
  auto integrand = [&](double r) {
    if (r == 0.0) return 0.0;
    return 4.0 * std::numbers::pi * r * r * yukawa_eval(params, r);
  };
  double total = 0.0;
  double lo = 0.0;
  while (lo < r_max) {
    // Past 60 decay lengths the remaining tail is below double precision.
    const double hi = lo >= 60.0 * decay ? r_max : std::min(r_max, lo + decay);
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 10, 1e-15);
    lo = hi;
  }
  return {total, r_max < 20.0 * decay};
}

} // namespace singlim
