#pragma once

#include <cstdint>
#include <optional>

#include "pdac/arrays.hpp"
#include "pdac/sampling.hpp"

namespace pdac {

/// Per-coil complex receive gains S_c, normalized so sum_c conj(S_c) S_c = 1
/// at every pixel.
class CoilSensitivities {
 public:
  /// Throws ValidationError if the normalization is violated by more than tol.
  explicit CoilSensitivities(ComplexStack maps, double tol = 1e-10);

  std::size_t coils() const noexcept { return maps_.coils(); }
  std::size_t height() const noexcept { return maps_.height(); }
  std::size_t width() const noexcept { return maps_.width(); }
  const ComplexStack& maps() const noexcept { return maps_; }
  const Complex& operator()(std::size_t coil, std::size_t row, std::size_t col) const {
    return maps_(coil, row, col);
  }

  /// Largest deviation of sum_c |S_c|^2 from 1.
  static double normalization_error(const ComplexStack& maps);

 private:
  ComplexStack maps_;
};

/// Complex circular Gaussian measurement noise; sigma is the standard
/// deviation of each real and imaginary component.
struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Zeroes every column outside the mask support, in every coil.
KSpace degrade(const KSpace& z, const CartesianMask& m);

/// y = D F x + noise. Unsampled columns stay exactly zero.
KSpace forward_single(const ComplexImage& x, const CartesianMask& m, const NoiseModel& noise);

/// y_c = D F (S_c x) + noise_c for every coil.
KSpace forward_multi(const ComplexImage& x, const CoilSensitivities& s, const CartesianMask& m,
                     const NoiseModel& noise);

/// x = sum_c conj(S_c) ifft2c(z_c): adjoint of the fully sampled encode.
ComplexImage coil_combine(const KSpace& z, const CoilSensitivities& s);

/// Fully sampled encoding operator: per-coil fft2c(S_c x), or fft2c(x) when
/// no sensitivities are given.
KSpace encode(const ComplexImage& x, const CoilSensitivities* s);

/// Adjoint of encode: coil_combine, or ifft2c for single-coil data.
ComplexImage adjoint(const KSpace& z, const CoilSensitivities* s);

/// Adjoint of forward_single without noise: ifft2c of the mask-projected input.
ComplexImage adjoint_single(const KSpace& z, const CartesianMask& m);

/// Smooth synthetic receive profiles: Gaussian bumps placed at equal angles on
/// a ring around the field of view, each with a gentle linear phase, then
/// normalized pixelwise.
CoilSensitivities synth_sensitivities(std::size_t coils, std::size_t height, std::size_t width);

/// Modified (high-contrast) Shepp-Logan phantom, 10 ellipses, values in [0, 1].
ComplexImage shepp_logan(std::size_t height, std::size_t width);

/// Phantom intensity at normalized coordinates (x right, y up, both in [-1, 1]).
double shepp_logan_value(double x, double y);

}  // namespace pdac
