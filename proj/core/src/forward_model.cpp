#include "pdac/forward_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "pdac/errors.hpp"
#include "pdac/fft.hpp"

namespace pdac {

CoilSensitivities::CoilSensitivities(ComplexStack maps, double tol) : maps_(std::move(maps)) {
  if (maps_.coils() == 0 || maps_.height() == 0 || maps_.width() == 0) {
    throw DimensionError("coil sensitivities need at least one non-empty coil");
  }
  const double err = normalization_error(maps_);
  if (!(err <= tol)) {
    throw ValidationError(fmt::format("coil sensitivities are not normalized (max deviation {:.3e})", err));
  }
}

double CoilSensitivities::normalization_error(const ComplexStack& maps) {
  double worst = 0.0;
  for (std::size_t i = 0; i < maps.plane_size(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < maps.coils(); ++c) acc += std::norm(maps.plane(c)[i]);
    worst = std::max(worst, std::abs(acc - 1.0));
  }
  return worst;
}

namespace {

void check_width(std::size_t data_width, const CartesianMask& m) {
  if (data_width != m.width()) {
    throw ShapeError(fmt::format("mask width {} does not match data width {}", m.width(), data_width));
  }
}

void add_noise(KSpace& y, const CartesianMask& m, const NoiseModel& noise) {
  if (noise.sigma < 0.0) throw ConfigError("noise sigma must be nonnegative");
  if (noise.sigma == 0.0) return;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  for (std::size_t c = 0; c < y.coils(); ++c) {
    for (std::size_t r = 0; r < y.height(); ++r) {
      for (std::size_t j = 0; j < y.width(); ++j) {
        if (!m.sampled(j)) continue;
        const double re = gauss(rng);
        const double im = gauss(rng);
        y(c, r, j) += Complex(re, im);
      }
    }
  }
}

void check_sensitivity_shape(const ComplexImage& x, const CoilSensitivities& s) {
  if (s.height() != x.height() || s.width() != x.width()) {
    throw ShapeError("coil sensitivity shape does not match image");
  }
}

}  // namespace

KSpace degrade(const KSpace& z, const CartesianMask& m) {
  check_width(z.width(), m);
  KSpace out = z;
  for (std::size_t c = 0; c < out.coils(); ++c) {
    for (std::size_t r = 0; r < out.height(); ++r) {
      for (std::size_t j = 0; j < out.width(); ++j) {
        if (!m.sampled(j)) out(c, r, j) = Complex{};
      }
    }
  }
  return out;
}

KSpace forward_single(const ComplexImage& x, const CartesianMask& m, const NoiseModel& noise) {
  check_width(x.width(), m);
  KSpace y = degrade(fft2c(x), m);
  add_noise(y, m, noise);
  return y;
}

KSpace encode(const ComplexImage& x, const CoilSensitivities* s) {
  if (s == nullptr) return fft2c(x);
  check_sensitivity_shape(x, *s);
  KSpace out(s->coils(), x.height(), x.width());
  ComplexImage weighted(x.height(), x.width());
  for (std::size_t c = 0; c < s->coils(); ++c) {
    auto plane = s->maps().plane(c);
    for (std::size_t i = 0; i < x.size(); ++i) weighted.data()[i] = plane[i] * x.data()[i];
    out.set_plane(c, fft2c_plane(weighted));
  }
  return out;
}

KSpace forward_multi(const ComplexImage& x, const CoilSensitivities& s, const CartesianMask& m,
                     const NoiseModel& noise) {
  check_width(x.width(), m);
  KSpace y = degrade(encode(x, &s), m);
  add_noise(y, m, noise);
  return y;
}

ComplexImage coil_combine(const KSpace& z, const CoilSensitivities& s) {
  if (z.coils() != s.coils() || z.height() != s.height() || z.width() != s.width()) {
    throw ShapeError("coil_combine: k-space and sensitivity shapes differ");
  }
  ComplexImage out(z.height(), z.width());
  for (std::size_t c = 0; c < z.coils(); ++c) {
    const ComplexImage img = ifft2c_plane(z.plane_image(c));
    auto plane = s.maps().plane(c);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += std::conj(plane[i]) * img.data()[i];
  }
  return out;
}

ComplexImage adjoint(const KSpace& z, const CoilSensitivities* s) {
  return s == nullptr ? ifft2c(z) : coil_combine(z, *s);
}

ComplexImage adjoint_single(const KSpace& z, const CartesianMask& m) { return ifft2c(degrade(z, m)); }

CoilSensitivities synth_sensitivities(std::size_t coils, std::size_t height, std::size_t width) {
  if (coils < 1) throw ConfigError("at least one coil is required");
  if (height == 0 || width == 0) throw DimensionError("synth_sensitivities: zero-sized grid");

  constexpr double kRing = 0.7;
  constexpr double kSpread = 0.8;
  constexpr double kPhaseSlope = 0.5;
  ComplexStack maps(coils, height, width);
  for (std::size_t c = 0; c < coils; ++c) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(coils);
    const double cx = kRing * std::cos(angle);
    const double cy = kRing * std::sin(angle);
    for (std::size_t r = 0; r < height; ++r) {
      const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(height);
      for (std::size_t j = 0; j < width; ++j) {
        const double x = (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(width) - 1.0;
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        const double magnitude = std::exp(-d2 / (2.0 * kSpread * kSpread));
        const double phase = angle + kPhaseSlope * (x * std::cos(angle) + y * std::sin(angle));
        maps(c, r, j) = std::polar(magnitude, phase);
      }
    }
  }
  for (std::size_t i = 0; i < maps.plane_size(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < coils; ++c) acc += std::norm(maps.plane(c)[i]);
    const double inv = 1.0 / std::sqrt(acc);
    for (std::size_t c = 0; c < coils; ++c) maps.plane(c)[i] *= inv;
  }
  return CoilSensitivities(std::move(maps));
}

namespace {

struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;
};

// Toft's modified Shepp-Logan table.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

}  // namespace

double shepp_logan_value(double x, double y) {
  double v = 0.0;
  for (const auto& e : kSheppLogan) {
    const double t = e.angle_deg * std::numbers::pi / 180.0;
    const double dx = x - e.center_x;
    const double dy = y - e.center_y;
    const double u = dx * std::cos(t) + dy * std::sin(t);
    const double w = -dx * std::sin(t) + dy * std::cos(t);
    if ((u * u) / (e.semi_x * e.semi_x) + (w * w) / (e.semi_y * e.semi_y) <= 1.0) v += e.intensity;
  }
  return std::clamp(v, 0.0, 1.0);
}

ComplexImage shepp_logan(std::size_t height, std::size_t width) {
  if (height < 8 || width < 8) throw DimensionError("shepp_logan: grid must be at least 8 x 8");
  ComplexImage img(height, width);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(height);
    for (std::size_t j = 0; j < width; ++j) {
      const double x = (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(width) - 1.0;
      img(r, j) = Complex(shepp_logan_value(x, y), 0.0);
    }
  }
  return img;
}

}  // namespace pdac
