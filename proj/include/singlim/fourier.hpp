#pragma once

#include "singlim/field.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace singlim {

/**
 * Real-to-complex discrete Fourier transform on a periodic grid.
 *
 * The spectrum uses the half-complex layout: all axes full length except the
 * last, which keeps n/2 + 1 modes. inverse() applies the 1/N normalization so
 * inverse(forward(v)) == v up to round-off.
 */
class RealFourierTransform {
public:
  explicit RealFourierTransform(const Grid& grid);
  ~RealFourierTransform();
  RealFourierTransform(const RealFourierTransform&) = delete;
  RealFourierTransform& operator=(const RealFourierTransform&) = delete;
  RealFourierTransform(RealFourierTransform&&) noexcept;
  RealFourierTransform& operator=(RealFourierTransform&&) noexcept;

  const Grid& grid() const noexcept { return grid_; }
  std::size_t spectrum_size() const noexcept { return k2_.size(); }

  /// |k|^2 for every spectral slot, with k = 2 pi m / L.
  std::span<const double> squared_wavenumbers() const noexcept { return k2_; }

  std::vector<std::complex<double>> forward(std::span<const double> values) const;
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;

private:
  struct Plans;
  Grid grid_;
  std::vector<double> k2_;
  std::unique_ptr<Plans> plans_;
};

} // namespace singlim
