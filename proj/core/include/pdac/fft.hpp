#pragma once

#include "pdac/arrays.hpp"

namespace pdac {

/// Centered orthonormal 2D DFT. DC lands at (H/2, W/2) (integer division),
/// and the 1/sqrt(HW) scaling makes the transform unitary.
/// Throws DimensionError on an empty grid.
KSpace fft2c(const ComplexImage& img);

/// Inverse of fft2c. Requires a single-coil input (ShapeError otherwise).
ComplexImage ifft2c(const KSpace& k);

/// Plane-level variants used for per-coil work.
ComplexImage fft2c_plane(const ComplexImage& img);
ComplexImage ifft2c_plane(const ComplexImage& k);

/// Orthonormal 2D DCT-II and its inverse on a real H x W grid (row-major).
void dct2_ortho(std::span<double> data, std::size_t height, std::size_t width);
void idct2_ortho(std::span<double> data, std::size_t height, std::size_t width);

}  // namespace pdac
