#include "pdac/arrays.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pdac/errors.hpp"

namespace pdac {

namespace {

bool finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

ComplexImage::ComplexImage(std::size_t height, std::size_t width)
    : height_(height), width_(width), data_(height * width) {}

ComplexImage::ComplexImage(std::size_t height, std::size_t width, std::vector<Complex> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != height_ * width_) {
    throw ShapeError("image data length does not match height x width");
  }
}

bool ComplexImage::all_finite() const noexcept { return std::all_of(data_.begin(), data_.end(), finite); }

ComplexStack::ComplexStack(std::size_t coils, std::size_t height, std::size_t width)
    : coils_(coils), height_(height), width_(width), data_(coils * height * width) {}

ComplexStack::ComplexStack(std::size_t coils, std::size_t height, std::size_t width,
                           std::vector<Complex> data)
    : coils_(coils), height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != coils_ * height_ * width_) {
    throw ShapeError("stack data length does not match coils x height x width");
  }
}

std::span<Complex> ComplexStack::plane(std::size_t coil) {
  return std::span<Complex>(data_).subspan(coil * plane_size(), plane_size());
}

std::span<const Complex> ComplexStack::plane(std::size_t coil) const {
  return std::span<const Complex>(data_).subspan(coil * plane_size(), plane_size());
}

ComplexImage ComplexStack::plane_image(std::size_t coil) const {
  auto p = plane(coil);
  return ComplexImage(height_, width_, std::vector<Complex>(p.begin(), p.end()));
}

void ComplexStack::set_plane(std::size_t coil, const ComplexImage& img) {
  if (img.height() != height_ || img.width() != width_) {
    throw ShapeError("plane shape does not match stack");
  }
  std::copy(img.data().begin(), img.data().end(), plane(coil).begin());
}

bool ComplexStack::all_finite() const noexcept { return std::all_of(data_.begin(), data_.end(), finite); }

KSpace KSpace::from_image_plane(const ComplexImage& plane) {
  KSpace k(1, plane.height(), plane.width());
  k.set_plane(0, plane);
  return k;
}

double norm2(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& c : v) acc += std::norm(c);
  return std::sqrt(acc);
}

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pdac
