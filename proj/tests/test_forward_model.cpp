#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pdac/errors.hpp"
#include "pdac/fft.hpp"
#include "pdac/forward_model.hpp"

namespace pdac {
namespace {

constexpr double kSensitivityJump64x64C4 = 0.017085685796908889;

using testing::random_image;
using testing::random_kspace;

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc;
}

TEST(ForwardSingle, FullMaskIsFft) {
  std::mt19937_64 rng(1);
  const ComplexImage x = random_image(16, 12, rng);
  EXPECT_EQ(forward_single(x, CartesianMask::full(12), {}), fft2c(x));
}

TEST(ForwardSingle, ZeroFilledOffMask) {
  std::mt19937_64 rng(2);
  const ComplexImage x = random_image(8, 10, rng);
  std::vector<std::uint8_t> bits(10, 0);
  bits[4] = 1;
  const KSpace y = forward_single(x, CartesianMask(bits), {0.5, 3});
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t j = 0; j < 10; ++j) {
      if (j != 4) EXPECT_EQ(y(0, r, j), Complex(0.0, 0.0));
    }
  }
}

TEST(ForwardSingle, ProjectionShrinksNorm) {
  std::mt19937_64 rng(3);
  const ComplexImage x = random_image(16, 16, rng);
  const auto m = CartesianMask::from_string("1010101010101010");
  EXPECT_LE(norm2(forward_single(x, m, {}).data()), norm2(fft2c(x).data()));
}

TEST(ForwardSingle, AdjointIdentity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexImage x = random_image(12, 14, rng);
    const KSpace z = random_kspace(1, 12, 14, rng);
    const auto m = make_acquisition_mask(14, 3, 0.15, static_cast<std::uint64_t>(trial));
    const KSpace ax = forward_single(x, m, {});
    const ComplexImage az = adjoint_single(z, m);
    const Complex lhs = inner(ax.data(), z.data());
    const Complex rhs = inner(x.data(), az.data());
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
  }
}

TEST(ForwardSingle, NoiseOnlyOnSampledAndDeterministic) {
  const ComplexImage x = shepp_logan(16, 16);
  const auto m = make_acquisition_mask(16, 4, 0.125, 0);
  const KSpace a = forward_single(x, m, {0.1, 99});
  const KSpace b = forward_single(x, m, {0.1, 99});
  const KSpace c = forward_single(x, m, {0.1, 100});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  const KSpace clean = forward_single(x, m, {});
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t j = 0; j < 16; ++j) {
      if (m.sampled(j)) {
        EXPECT_NE(a(0, r, j), clean(0, r, j));
      } else {
        EXPECT_EQ(a(0, r, j), Complex(0.0, 0.0));
      }
    }
  }
}

TEST(ForwardSingle, NoiseStatistics) {
  const ComplexImage x(128, 128);
  const KSpace y = forward_single(x, CartesianMask::full(128), {0.2, 5});
  double sum_re = 0.0;
  double sum_sq = 0.0;
  for (const Complex v : y.data()) {
    sum_re += v.real();
    sum_sq += v.real() * v.real() + v.imag() * v.imag();
  }
  const double n = static_cast<double>(y.size());
  EXPECT_NEAR(sum_re / n, 0.0, 0.01);
  EXPECT_NEAR(std::sqrt(sum_sq / (2.0 * n)), 0.2, 0.005);
}

TEST(Degrade, Projection) {
  std::mt19937_64 rng(5);
  const KSpace z = random_kspace(3, 6, 8, rng);
  const auto m = CartesianMask::from_string("01100101");
  const KSpace d = degrade(z, m);
  EXPECT_EQ(degrade(d, m), d);
  EXPECT_EQ(degrade(z, CartesianMask::full(8)), z);
  EXPECT_LE(norm2(d.data()), norm2(z.data()));
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t r = 0; r < 6; ++r) {
      for (std::size_t j = 0; j < 8; ++j) {
        EXPECT_EQ(d(c, r, j), m.sampled(j) ? z(c, r, j) : Complex(0.0, 0.0));
      }
    }
  }
}

TEST(CoilSensitivities, NormalizationEnforced) {
  for (std::size_t c : {1u, 2u, 4u, 8u}) {
    const auto s = synth_sensitivities(c, 24, 20);
    EXPECT_LE(CoilSensitivities::normalization_error(s.maps()), 1e-10);
  }
  ComplexStack bad(2, 4, 4);
  for (auto& v : bad.data()) v = 1.0;
  EXPECT_THROW(CoilSensitivities{bad}, ValidationError);
}

TEST(CoilSensitivities, SingleCoilUnitModulus) {
  const auto s = synth_sensitivities(1, 32, 32);
  for (const Complex v : s.maps().data()) EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
}

// Largest modulus jump between horizontally or vertically adjacent pixels.
double max_neighbor_jump(const CoilSensitivities& s) {
  double worst = 0.0;
  for (std::size_t c = 0; c < s.coils(); ++c) {
    for (std::size_t r = 0; r < s.height(); ++r) {
      for (std::size_t j = 0; j < s.width(); ++j) {
        const double here = std::abs(s(c, r, j));
        if (r + 1 < s.height()) worst = std::max(worst, std::abs(here - std::abs(s(c, r + 1, j))));
        if (j + 1 < s.width()) worst = std::max(worst, std::abs(here - std::abs(s(c, r, j + 1))));
      }
    }
  }
  return worst;
}

TEST(CoilSensitivities, Smooth) {
  const double jump = max_neighbor_jump(synth_sensitivities(4, 64, 64));
  EXPECT_LT(jump, 0.2);
  // Regression value of the generator.
  EXPECT_NEAR(jump, kSensitivityJump64x64C4, 1e-9);
}

TEST(ForwardMulti, SingleUnitCoilMatchesSingle) {
  std::mt19937_64 rng(6);
  const ComplexImage x = random_image(10, 10, rng);
  ComplexStack ones(1, 10, 10);
  for (auto& v : ones.data()) v = 1.0;
  const CoilSensitivities s(ones);
  const auto m = CartesianMask::from_string("1100110011");
  EXPECT_EQ(forward_multi(x, s, m, {}), forward_single(x, m, {}));
  const KSpace z = random_kspace(1, 10, 10, rng);
  EXPECT_LT(max_abs_diff(coil_combine(z, s).data(), ifft2c(z).data()), 1e-15);
}

TEST(ForwardMulti, FullMaskCombineIsIdentity) {
  std::mt19937_64 rng(7);
  for (std::size_t c : {2u, 4u, 8u}) {
    const ComplexImage x = random_image(16, 18, rng);
    const auto s = synth_sensitivities(c, 16, 18);
    const KSpace y = forward_multi(x, s, CartesianMask::full(18), {});
    EXPECT_EQ(y.coils(), c);
    EXPECT_LT(max_abs_diff(coil_combine(y, s).data(), x.data()), 1e-10);
    EXPECT_EQ(encode(x, &s), y);
    EXPECT_EQ(adjoint(y, &s), coil_combine(y, s));
  }
}

TEST(ForwardMulti, SharedMaskAndZeroInput) {
  std::mt19937_64 rng(8);
  const auto s = synth_sensitivities(4, 8, 8);
  const auto m = CartesianMask::from_string("00011000");
  const KSpace y = forward_multi(random_image(8, 8, rng), s, m, {0.1, 1});
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t r = 0; r < 8; ++r) {
      for (std::size_t j = 0; j < 8; ++j) {
        if (!m.sampled(j)) EXPECT_EQ(y(c, r, j), Complex(0.0, 0.0));
      }
    }
  }
  EXPECT_EQ(max_abs(coil_combine(KSpace(4, 8, 8), s).data()), 0.0);
}

TEST(ForwardMulti, AdjointIdentity) {
  std::mt19937_64 rng(9);
  const auto s = synth_sensitivities(3, 12, 10);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexImage x = random_image(12, 10, rng);
    const KSpace z = random_kspace(3, 12, 10, rng);
    const Complex lhs = inner(encode(x, &s).data(), z.data());
    const Complex rhs = inner(x.data(), adjoint(z, &s).data());
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
  }
}

TEST(ForwardMulti, ShapeErrors) {
  const auto s = synth_sensitivities(2, 8, 8);
  EXPECT_THROW(forward_multi(ComplexImage(8, 6), s, CartesianMask::full(6), {}), ShapeError);
  EXPECT_THROW(forward_single(ComplexImage(8, 8), CartesianMask::full(6), {}), ShapeError);
  EXPECT_THROW(coil_combine(KSpace(3, 8, 8), s), ShapeError);
}

// Independent evaluation of the modified (Toft) Shepp-Logan ellipse table.
double phantom_reference(double x, double y) {
  struct E {
    double a, major, minor, x0, y0, phi_deg;
  };
  static constexpr E kTable[] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},        {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},       {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},     {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},   {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  double v = 0.0;
  for (const E& e : kTable) {
    const double phi = e.phi_deg * std::numbers::pi / 180.0;
    const double dx = x - e.x0;
    const double dy = y - e.y0;
    const double u = (dx * std::cos(phi) + dy * std::sin(phi)) / e.major;
    const double w = (dy * std::cos(phi) - dx * std::sin(phi)) / e.minor;
    if (u * u + w * w <= 1.0) v += e.a;
  }
  return std::clamp(v, 0.0, 1.0);
}

TEST(Phantom, MatchesEllipseOracleAtEveryResolution) {
  for (const auto [h, w] : {std::pair<std::size_t, std::size_t>{64, 64}, {128, 128}, {40, 56}}) {
    const ComplexImage img = shepp_logan(h, w);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t j = 0; j < w; ++j) {
        const double x = (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(w) - 1.0;
        const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(h);
        ASSERT_NEAR(img(r, j).real(), phantom_reference(x, y), 1e-12) << r << "," << j;
        ASSERT_EQ(img(r, j).imag(), 0.0);
      }
    }
  }
}

TEST(Phantom, ResolutionIndependentGeometry) {
  // Coarse pixel (r, j) covers fine pixels (2r..2r+1, 2j..2j+1). Where the four
  // fine pixels agree the coarse pixel lies inside the same ellipses.
  const ComplexImage coarse = shepp_logan(64, 64);
  const ComplexImage fine = shepp_logan(128, 128);
  std::size_t uniform_blocks = 0;
  std::size_t agreeing = 0;
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t j = 0; j < 64; ++j) {
      const Complex v = fine(2 * r, 2 * j);
      if (fine(2 * r + 1, 2 * j) != v || fine(2 * r, 2 * j + 1) != v || fine(2 * r + 1, 2 * j + 1) != v) continue;
      ++uniform_blocks;
      agreeing += coarse(r, j) == v ? 1 : 0;
    }
  }
  EXPECT_GT(uniform_blocks, 3500u);
  EXPECT_GE(static_cast<double>(agreeing), 0.999 * static_cast<double>(uniform_blocks));
}

TEST(Phantom, RangeCornersAndErrors) {
  const ComplexImage img = shepp_logan(128, 128);
  double lo = 1.0;
  double hi = 0.0;
  for (const Complex v : img.data()) {
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 1.0);
  EXPECT_EQ(hi, 1.0);
  EXPECT_EQ(img(0, 0), Complex(0.0, 0.0));
  EXPECT_EQ(img(0, 127), Complex(0.0, 0.0));
  EXPECT_EQ(img(127, 0), Complex(0.0, 0.0));
  EXPECT_EQ(img(127, 127), Complex(0.0, 0.0));
  EXPECT_THROW(shepp_logan(7, 64), DimensionError);
}

}  // namespace
}  // namespace pdac
