#include "pdac/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "pdac/errors.hpp"

namespace pdac {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (kind, H, W) and kept for the
// lifetime of the process.
enum class PlanKind { Forward, Backward, Dct, Idct };

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(PlanKind kind, std::size_t h, std::size_t w) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, h, w);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int n0 = static_cast<int>(h);
    const int n1 = static_cast<int>(w);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (kind == PlanKind::Forward || kind == PlanKind::Backward) {
      auto* in = fftw_alloc_complex(h * w);
      auto* out = fftw_alloc_complex(h * w);
      plan = fftw_plan_dft_2d(n0, n1, in, out, kind == PlanKind::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                              flags);
      fftw_free(in);
      fftw_free(out);
    } else {
      auto* in = fftw_alloc_real(h * w);
      auto* out = fftw_alloc_real(h * w);
      const auto r2r = kind == PlanKind::Dct ? FFTW_REDFT10 : FFTW_REDFT01;
      plan = fftw_plan_r2r_2d(n0, n1, in, out, r2r, r2r, flags);
      fftw_free(in);
      fftw_free(out);
    }
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<PlanKind, std::size_t, std::size_t>, fftw_plan> plans_;
};

// ifftshift then transform then fftshift, folded into index arithmetic on the
// copies in and out of the scratch buffer.
ComplexImage centered_transform(const ComplexImage& src, PlanKind kind) {
  const std::size_t h = src.height();
  const std::size_t w = src.width();
  if (h == 0 || w == 0) throw DimensionError("fft2c: zero-sized grid");

  const std::size_t ch = h / 2;
  const std::size_t cw = w / 2;
  std::vector<Complex> in(h * w);
  std::vector<Complex> out(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t sr = (r + ch) % h;
    for (std::size_t c = 0; c < w; ++c) {
      in[r * w + c] = src(sr, (c + cw) % w);
    }
  }

  fftw_execute_dft(PlanCache::instance().get(kind, h, w), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));

  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  ComplexImage dst(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t dr = (r + ch) % h;
    for (std::size_t c = 0; c < w; ++c) {
      dst(dr, (c + cw) % w) = out[r * w + c] * scale;
    }
  }
  return dst;
}

double dct_scale(std::size_t k, std::size_t n) {
  return k == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
}

}  // namespace

ComplexImage fft2c_plane(const ComplexImage& img) { return centered_transform(img, PlanKind::Forward); }

ComplexImage ifft2c_plane(const ComplexImage& k) { return centered_transform(k, PlanKind::Backward); }

KSpace fft2c(const ComplexImage& img) { return KSpace::from_image_plane(fft2c_plane(img)); }

ComplexImage ifft2c(const KSpace& k) {
  if (k.coils() != 1) throw ShapeError("ifft2c: expected single-coil k-space, got multiple coils");
  return ifft2c_plane(k.plane_image(0));
}

void dct2_ortho(std::span<double> data, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw DimensionError("dct2: zero-sized grid");
  if (data.size() != height * width) throw ShapeError("dct2: data length mismatch");
  std::vector<double> out(data.size());
  fftw_execute_r2r(PlanCache::instance().get(PlanKind::Dct, height, width), data.data(), out.data());
  // FFTW's REDFT10 carries a factor of 2 per dimension.
  for (std::size_t r = 0; r < height; ++r) {
    const double sr = dct_scale(r, height) * 0.5;
    for (std::size_t c = 0; c < width; ++c) {
      data[r * width + c] = out[r * width + c] * sr * dct_scale(c, width) * 0.5;
    }
  }
}

void idct2_ortho(std::span<double> data, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw DimensionError("idct2: zero-sized grid");
  if (data.size() != height * width) throw ShapeError("idct2: data length mismatch");
  // REDFT01 computes X0 + 2 * sum_k Xk cos(...), so non-DC terms are halved.
  std::vector<double> in(data.size());
  for (std::size_t r = 0; r < height; ++r) {
    const double fr = dct_scale(r, height) * (r == 0 ? 1.0 : 0.5);
    for (std::size_t c = 0; c < width; ++c) {
      const double fc = dct_scale(c, width) * (c == 0 ? 1.0 : 0.5);
      in[r * width + c] = data[r * width + c] * fr * fc;
    }
  }
  fftw_execute_r2r(PlanCache::instance().get(PlanKind::Idct, height, width), in.data(), data.data());
}

}  // namespace pdac
