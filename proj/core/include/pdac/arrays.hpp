#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pdac {

using Complex = std::complex<double>;

/// H x W complex image in the spatial domain, row-major.
class ComplexImage {
 public:
  ComplexImage() = default;
  ComplexImage(std::size_t height, std::size_t width);
  ComplexImage(std::size_t height, std::size_t width, std::vector<Complex> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  bool same_shape(const ComplexImage& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const ComplexImage&, const ComplexImage&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<Complex> data_;
};

/// Stack of C complex H x W planes, row-major within each plane, planes contiguous.
/// Base storage for multi-coil k-space and coil sensitivity maps.
class ComplexStack {
 public:
  ComplexStack() = default;
  ComplexStack(std::size_t coils, std::size_t height, std::size_t width);
  ComplexStack(std::size_t coils, std::size_t height, std::size_t width, std::vector<Complex> data);

  std::size_t coils() const noexcept { return coils_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t coil, std::size_t row, std::size_t col) {
    return data_[(coil * height_ + row) * width_ + col];
  }
  const Complex& operator()(std::size_t coil, std::size_t row, std::size_t col) const {
    return data_[(coil * height_ + row) * width_ + col];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> plane(std::size_t coil);
  std::span<const Complex> plane(std::size_t coil) const;

  /// Copies one plane out as an image.
  ComplexImage plane_image(std::size_t coil) const;
  void set_plane(std::size_t coil, const ComplexImage& img);

  bool same_shape(const ComplexStack& other) const noexcept {
    return coils_ == other.coils_ && height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const ComplexStack&, const ComplexStack&) = default;

 private:
  std::size_t coils_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<Complex> data_;
};

/// Frequency-domain samples: y, intermediate measurements z_t and their
/// denoised counterparts. coils == 1 for single-coil acquisitions.
class KSpace : public ComplexStack {
 public:
  using ComplexStack::ComplexStack;
  explicit KSpace(ComplexStack stack) : ComplexStack(std::move(stack)) {}

  /// Single-coil k-space from one plane.
  static KSpace from_image_plane(const ComplexImage& plane);

  friend bool operator==(const KSpace&, const KSpace&) = default;
};

double norm2(std::span<const Complex> v);
double max_abs(std::span<const Complex> v);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace pdac
