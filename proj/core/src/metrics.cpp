#include "pdac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdac/errors.hpp"

namespace pdac {

namespace {

void check_same(const ComplexImage& x, const ComplexImage& gt) {
  if (!x.same_shape(gt)) throw ShapeError("metric inputs differ in shape");
}

double peak_of(const RealImage& img) {
  double peak = 0.0;
  for (double v : img.data) peak = std::max(peak, std::abs(v));
  return peak;
}

}  // namespace

RealImage magnitude(const ComplexImage& img) {
  RealImage out{img.height(), img.width(), std::vector<double>(img.size())};
  for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = std::abs(img.data()[i]);
  return out;
}

double psnr(const ComplexImage& x, const ComplexImage& gt) {
  check_same(x, gt);
  const RealImage mx = magnitude(x);
  const RealImage mg = magnitude(gt);
  const double peak = peak_of(mg);
  if (peak == 0.0) throw MetricError("psnr: reference image is all zero");
  double mse = 0.0;
  for (std::size_t i = 0; i < mx.data.size(); ++i) {
    const double d = mx.data[i] - mg.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(mx.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const RealImage& x, const RealImage& gt) {
  constexpr std::size_t kWin = 7;
  constexpr double kK1 = 0.01;
  constexpr double kK2 = 0.03;
  if (x.height != gt.height || x.width != gt.width) throw ShapeError("ssim: shape mismatch");
  if (x.height < kWin || x.width < kWin) throw DimensionError("ssim: image smaller than the 7x7 window");

  const double range = peak_of(gt);
  const double c1 = (kK1 * range) * (kK1 * range);
  const double c2 = (kK2 * range) * (kK2 * range);
  const double n = static_cast<double>(kWin * kWin);
  const double cov_norm = n / (n - 1.0);

  const std::size_t w = x.width;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r0 = 0; r0 + kWin <= x.height; ++r0) {
    for (std::size_t c0 = 0; c0 + kWin <= x.width; ++c0) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t r = r0; r < r0 + kWin; ++r) {
        for (std::size_t c = c0; c < c0 + kWin; ++c) {
          const double a = x.data[r * w + c];
          const double b = gt.data[r * w + c];
          sx += a;
          sy += b;
          sxx += a * a;
          syy += b * b;
          sxy += a * b;
        }
      }
      const double ux = sx / n;
      const double uy = sy / n;
      const double vx = cov_norm * (sxx / n - ux * ux);
      const double vy = cov_norm * (syy / n - uy * uy);
      const double vxy = cov_norm * (sxy / n - ux * uy);
      total += ((2 * ux * uy + c1) * (2 * vxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

double ssim(const ComplexImage& x, const ComplexImage& gt) {
  check_same(x, gt);
  return ssim(magnitude(x), magnitude(gt));
}

double nmse(const ComplexImage& x, const ComplexImage& gt) {
  check_same(x, gt);
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    err += std::norm(x.data()[i] - gt.data()[i]);
    ref += std::norm(gt.data()[i]);
  }
  if (ref == 0.0) throw MetricError("nmse: reference image is all zero");
  return err / ref;
}

double rec_loss(const ComplexImage& x, const ComplexImage& gt) {
  check_same(x, gt);
  if (x.size() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(std::abs(x.data()[i]) - std::abs(gt.data()[i]));
  return acc / static_cast<double>(x.size());
}

double prob_loss(const std::vector<ProbLossTerm>& trace) {
  double loss = 0.0;
  for (const auto& term : trace) {
    const std::size_t w = term.mask.width();
    if (term.confidence.width() != w || term.squashed_error.size() != w) {
      throw ShapeError("prob_loss: mask, confidence and error widths differ");
    }
    for (std::size_t j = 0; j < w; ++j) {
      if (term.mask.sampled(j)) loss += std::abs(term.confidence.probs[j] - (1.0 - term.squashed_error[j]));
    }
  }
  return loss;
}

double total_loss(double l_rec, double l_prob, double alpha) {
  if (alpha < 0.0) throw ConfigError("total_loss: alpha must be nonnegative");
  return l_rec + alpha * l_prob;
}

MetricSet evaluate(const ComplexImage& x, const ComplexImage& gt, double l_prob, double alpha) {
  MetricSet m;
  m.psnr = psnr(x, gt);
  m.ssim = ssim(x, gt);
  m.nmse = nmse(x, gt);
  m.l_rec = rec_loss(x, gt);
  m.l_prob = l_prob;
  m.l_total = total_loss(m.l_rec, l_prob, alpha);
  return m;
}

}  // namespace pdac
