#include "singlim/greens.hpp"

#include <stdexcept>

namespace singlim {

SpectralGreen::SpectralGreen(const Grid& grid, const KernelParams& params) : params_(params), fft_(grid) {
  params.validate();
  const double e2 = params.effective_eps() * params.effective_eps();
  const double a2 = params.a * params.a;
  const auto k2 = fft_.squared_wavenumbers();
  multiplier_.resize(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    multiplier_[i] = 1.0 / (e2 * k2[i] + a2);
  }
}

ScalarField SpectralGreen::apply(const ScalarField& v) const {
  if (!(v.grid() == grid())) {
    throw std::invalid_argument("spectral Green applied to a field on a different grid");
  }
  if (v.is_constant()) {
    return ScalarField(v.grid(), v[0] / (params_.a * params_.a));
  }
  auto spectrum = fft_.forward(v.values());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    spectrum[i] *= multiplier_[i];
  }
  return ScalarField(v.grid(), fft_.inverse(spectrum));
}

ScalarField green_apply_spectral(const ScalarField& v, const KernelParams& params) {
  if (v.grid().bc() != Boundary::Periodic) {
    throw std::invalid_argument("spectral Green path needs a periodic grid; use the resolvent for Dirichlet boxes");
  }
  return SpectralGreen(v.grid(), params).apply(v);
}

std::vector<LimitErrorRow> delta_limit_check(const ScalarField& h, const std::vector<double>& eps_list, double a) {
  const double a2 = a * a;
  const ScalarField target = h.map([a2](double v) { return v / a2; });
  std::vector<LimitErrorRow> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) {
    const ScalarField smoothed = green_apply_spectral(h, {eps, a, false});
    rows.push_back({eps, sup_distance(smoothed, target)});
  }
  return rows;
}

} // namespace singlim
