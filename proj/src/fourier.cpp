#include "singlim/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace singlim {

namespace {
// The FFTW planner is not reentrant.
std::mutex planner_mutex;
} // namespace

struct RealFourierTransform::Plans {
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  double* real_buf = nullptr;
  fftw_complex* complex_buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(real_buf);
    fftw_free(complex_buf);
  }
};

RealFourierTransform::RealFourierTransform(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  if (grid.bc() != Boundary::Periodic) {
    throw std::invalid_argument("Fourier transform requires a periodic grid");
  }
  const int d = grid.dims();
  const int n = grid.n();
  const int half = n / 2 + 1;

  std::size_t outer = 1;
  for (int i = 0; i < d - 1; ++i) outer *= static_cast<std::size_t>(n);
  plans_->real_size = grid.size();
  plans_->complex_size = outer * static_cast<std::size_t>(half);

  const double two_pi_over_l = 2.0 * std::numbers::pi / grid.length();
  auto wave = [&](int j) {
    const int m = j <= n / 2 ? j : j - n;
    return two_pi_over_l * m;
  };
  k2_.resize(plans_->complex_size);
  for (std::size_t s = 0; s < k2_.size(); ++s) {
    std::size_t rest = s;
    const int last = static_cast<int>(rest % half);
    rest /= half;
    double k2 = wave(last) * wave(last);
    for (int ax = 0; ax < d - 1; ++ax) {
      const int j = static_cast<int>(rest % n);
      rest /= n;
      k2 += wave(j) * wave(j);
    }
    k2_[s] = k2;
  }

  std::vector<int> shape(d, n);
  std::lock_guard lock(planner_mutex);
  plans_->real_buf = fftw_alloc_real(plans_->real_size);
  plans_->complex_buf = fftw_alloc_complex(plans_->complex_size);
  plans_->fwd = fftw_plan_dft_r2c(d, shape.data(), plans_->real_buf, plans_->complex_buf, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_c2r(d, shape.data(), plans_->complex_buf, plans_->real_buf, FFTW_ESTIMATE);
  if (!plans_->fwd || !plans_->inv) {
    throw std::runtime_error("FFTW plan creation failed");
  }
}

RealFourierTransform::~RealFourierTransform() = default;
RealFourierTransform::RealFourierTransform(RealFourierTransform&&) noexcept = default;
RealFourierTransform& RealFourierTransform::operator=(RealFourierTransform&&) noexcept = default;

std::vector<std::complex<double>> RealFourierTransform::forward(std::span<const double> values) const {
  if (values.size() != plans_->real_size) {
    throw std::invalid_argument("transform input size mismatch");
  }
  std::copy(values.begin(), values.end(), plans_->real_buf);
  fftw_execute(plans_->fwd);
  std::vector<std::complex<double>> out(plans_->complex_size);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {plans_->complex_buf[i][0], plans_->complex_buf[i][1]};
  }
  return out;
}

std::vector<double> RealFourierTransform::inverse(std::span<const std::complex<double>> spectrum) const {
  if (spectrum.size() != plans_->complex_size) {
    throw std::invalid_argument("transform spectrum size mismatch");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    plans_->complex_buf[i][0] = spectrum[i].real();
    plans_->complex_buf[i][1] = spectrum[i].imag();
  }
  fftw_execute(plans_->inv);
  const double scale = 1.0 / static_cast<double>(plans_->real_size);
  std::vector<double> out(plans_->real_size);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = plans_->real_buf[i] * scale;
  }
  return out;
}

} // namespace singlim
